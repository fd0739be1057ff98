//! Explicit-state NFA/DFA machinery over the alphabet of atom
//! valuations, plus the logic-to-automaton compilers.

pub(crate) mod ltlf;
pub(crate) mod ppltl;

pub use ltlf::ltlf_to_nfa;
pub use ppltl::{ppltl_to_dfa, subformula_count};

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::Error;
use crate::formula::{Atom, Valuation};

pub type StateId = usize;

/// A letter: one valuation of the alphabet's atoms, as a bitmask.
pub type Letter = u32;

/// An ordered list of atoms; letters are the subsets, indexed as bitmasks.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Alphabet {
    atoms: Vec<Atom>,
}

impl Alphabet {
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Alphabet {
        let mut atoms: Vec<Atom> = atoms.into_iter().collect();
        atoms.sort();
        atoms.dedup();
        assert!(atoms.len() <= 20, "alphabet too large for explicit enumeration");
        Alphabet { atoms }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom_index(&self, atom: &Atom) -> Option<usize> {
        self.atoms.iter().position(|a| a == atom)
    }

    pub fn letter_count(&self) -> usize {
        1 << self.atoms.len()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..self.letter_count() as Letter
    }

    pub fn letter_contains(&self, letter: Letter, atom_idx: usize) -> bool {
        letter & (1 << atom_idx) != 0
    }

    /// Letter for a valuation; atoms outside the alphabet are ignored.
    pub fn project(&self, valuation: &Valuation) -> Letter {
        let mut letter = 0;
        for (i, a) in self.atoms.iter().enumerate() {
            if valuation.contains(a) {
                letter |= 1 << i;
            }
        }
        letter
    }

    pub fn valuation(&self, letter: Letter) -> Valuation {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| self.letter_contains(letter, *i))
            .map(|(_, a)| a.clone())
            .collect()
    }

    pub fn letter_label(&self, letter: Letter) -> String {
        let names: Vec<&str> = self
            .atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| self.letter_contains(letter, *i))
            .map(|(_, a)| a.name())
            .collect();
        format!("{{{}}}", names.join(","))
    }
}

/// Nondeterministic finite automaton. Totality is not required.
#[derive(Clone, Debug)]
pub struct Nfa {
    pub alphabet: Alphabet,
    pub num_states: usize,
    pub initial: Vec<StateId>,
    /// transitions[state][letter] = successor states
    pub transitions: Vec<Vec<Vec<StateId>>>,
    pub finals: BTreeSet<StateId>,
}

impl Nfa {
    pub fn accepts(&self, word: &[Letter]) -> bool {
        let mut current: BTreeSet<StateId> = self.initial.iter().copied().collect();
        for &letter in word {
            let mut next = BTreeSet::new();
            for &s in &current {
                next.extend(self.transitions[s][letter as usize].iter().copied());
            }
            current = next;
        }
        current.iter().any(|s| self.finals.contains(s))
    }
}

/// Deterministic finite automaton with a total transition function.
#[derive(Clone, Debug)]
pub struct Dfa {
    pub alphabet: Alphabet,
    pub num_states: usize,
    pub initial: StateId,
    /// transitions[state][letter] = successor
    pub transitions: Vec<Vec<StateId>>,
    pub finals: BTreeSet<StateId>,
}

impl Dfa {
    pub fn step(&self, state: StateId, letter: Letter) -> StateId {
        self.transitions[state][letter as usize]
    }

    pub fn is_final(&self, state: StateId) -> bool {
        self.finals.contains(&state)
    }
}

/// States visited by the run on a word, starting at the initial state;
/// the result has one more entry than the word has letters.
pub fn dfa_run(dfa: &Dfa, word: &[Letter]) -> Result<Vec<StateId>, Error> {
    let mut run = Vec::with_capacity(word.len() + 1);
    let mut state = dfa.initial;
    run.push(state);
    for &letter in word {
        if letter as usize >= dfa.alphabet.letter_count() {
            return Err(Error::UnknownLetter { letter, atoms: dfa.alphabet.atoms.len() });
        }
        state = dfa.step(state, letter);
        run.push(state);
    }
    Ok(run)
}

pub fn dfa_accepts(dfa: &Dfa, word: &[Letter]) -> Result<bool, Error> {
    let run = dfa_run(dfa, word)?;
    Ok(dfa.is_final(*run.last().unwrap()))
}

/// Subset construction. Only subsets reachable from the initial set are
/// materialized; a subset is final iff it meets the NFA's final set.
pub fn nfa_to_dfa(nfa: &Nfa) -> Dfa {
    let nletters = nfa.alphabet.letter_count();
    let mut index: HashMap<BTreeSet<StateId>, StateId> = HashMap::new();
    let mut subsets: Vec<BTreeSet<StateId>> = Vec::new();
    let mut transitions: Vec<Vec<StateId>> = Vec::new();

    let initial_set: BTreeSet<StateId> = nfa.initial.iter().copied().collect();
    index.insert(initial_set.clone(), 0);
    subsets.push(initial_set);

    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        let mut row = Vec::with_capacity(nletters);
        for letter in 0..nletters {
            let mut next = BTreeSet::new();
            for &s in &subsets[id] {
                next.extend(nfa.transitions[s][letter].iter().copied());
            }
            let next_id = *index.entry(next.clone()).or_insert_with(|| {
                subsets.push(next);
                queue.push_back(subsets.len() - 1);
                subsets.len() - 1
            });
            row.push(next_id);
        }
        transitions.push(row);
    }

    let finals = subsets
        .iter()
        .enumerate()
        .filter(|(_, set)| set.iter().any(|s| nfa.finals.contains(s)))
        .map(|(i, _)| i)
        .collect();
    Dfa {
        alphabet: nfa.alphabet.clone(),
        num_states: subsets.len(),
        initial: 0,
        transitions,
        finals,
    }
}

/// Ensure the initial state has no incoming transitions, duplicating it
/// if necessary. The language on non-empty words is unchanged.
pub fn normalize_initial(dfa: &Dfa) -> Dfa {
    let incoming = dfa
        .transitions
        .iter()
        .any(|row| row.contains(&dfa.initial));
    if !incoming {
        return dfa.clone();
    }
    let mut out = dfa.clone();
    let fresh = out.num_states;
    out.num_states += 1;
    out.transitions.push(dfa.transitions[dfa.initial].clone());
    if dfa.is_final(dfa.initial) {
        out.finals.insert(fresh);
    }
    out.initial = fresh;
    out
}

/// Restrict to states reachable from the initial state.
pub fn prune_unreachable(dfa: &Dfa) -> Dfa {
    let mut seen = vec![false; dfa.num_states];
    let mut order = Vec::new();
    let mut queue = VecDeque::from([dfa.initial]);
    seen[dfa.initial] = true;
    while let Some(s) = queue.pop_front() {
        order.push(s);
        for &t in &dfa.transitions[s] {
            if !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    let mut remap = vec![usize::MAX; dfa.num_states];
    for (new, &old) in order.iter().enumerate() {
        remap[old] = new;
    }
    Dfa {
        alphabet: dfa.alphabet.clone(),
        num_states: order.len(),
        initial: remap[dfa.initial],
        transitions: order
            .iter()
            .map(|&old| dfa.transitions[old].iter().map(|&t| remap[t]).collect())
            .collect(),
        finals: dfa.finals.iter().filter(|s| seen[**s]).map(|s| remap[*s]).collect(),
    }
}

/// Moore partition refinement. Returns a language-equivalent DFA with
/// the minimal number of reachable states.
pub fn minimize(dfa: &Dfa) -> Dfa {
    let dfa = prune_unreachable(dfa);
    let nletters = dfa.alphabet.letter_count();
    let mut class: Vec<usize> = (0..dfa.num_states)
        .map(|s| usize::from(dfa.is_final(s)))
        .collect();
    loop {
        let mut signature: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut next_class = vec![0usize; dfa.num_states];
        for s in 0..dfa.num_states {
            let sig: Vec<usize> = (0..nletters).map(|a| class[dfa.transitions[s][a]]).collect();
            let n = signature.len();
            next_class[s] = *signature.entry((class[s], sig)).or_insert(n);
        }
        if next_class == class {
            break;
        }
        class = next_class;
    }
    let num_classes = class.iter().max().map(|m| m + 1).unwrap_or(0);
    let mut representative = vec![usize::MAX; num_classes];
    for s in 0..dfa.num_states {
        if representative[class[s]] == usize::MAX {
            representative[class[s]] = s;
        }
    }
    Dfa {
        alphabet: dfa.alphabet.clone(),
        num_states: num_classes,
        initial: class[dfa.initial],
        transitions: representative
            .iter()
            .map(|&s| (0..nletters).map(|a| class[dfa.transitions[s][a]]).collect())
            .collect(),
        finals: dfa.finals.iter().map(|&s| class[s]).collect(),
    }
}

/// Reachable product of deterministic transition systems over a shared
/// alphabet. Finals of the inputs are ignored; the per-state component
/// tuples are returned alongside.
pub fn product(components: &[&Dfa]) -> Result<(Dfa, Vec<Vec<StateId>>), Error> {
    let first = components.first().ok_or_else(|| {
        Error::AlphabetMismatch("product of zero systems".to_string())
    })?;
    for c in components {
        if c.alphabet != first.alphabet {
            return Err(Error::AlphabetMismatch(format!(
                "components over {:?} vs {:?}",
                c.alphabet.atoms, first.alphabet.atoms
            )));
        }
    }
    let nletters = first.alphabet.letter_count();
    let mut index: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut tuples: Vec<Vec<StateId>> = Vec::new();
    let mut transitions: Vec<Vec<StateId>> = Vec::new();

    let init: Vec<StateId> = components.iter().map(|c| c.initial).collect();
    index.insert(init.clone(), 0);
    tuples.push(init);
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        let mut row = Vec::with_capacity(nletters);
        for letter in 0..nletters {
            let next: Vec<StateId> = tuples[id]
                .iter()
                .zip(components)
                .map(|(&s, c)| c.transitions[s][letter])
                .collect();
            let next_id = *index.entry(next.clone()).or_insert_with(|| {
                tuples.push(next);
                queue.push_back(tuples.len() - 1);
                tuples.len() - 1
            });
            row.push(next_id);
        }
        transitions.push(row);
    }
    let dfa = Dfa {
        alphabet: first.alphabet.clone(),
        num_states: tuples.len(),
        initial: 0,
        transitions,
        finals: BTreeSet::new(),
    };
    Ok((dfa, tuples))
}

pub fn dfa_to_dot(dfa: &Dfa) -> String {
    let mut out = String::from("digraph dfa {\n  rankdir=LR;\n");
    let _ = writeln!(out, "  init [shape=point];");
    for s in 0..dfa.num_states {
        let shape = if dfa.is_final(s) { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  q{s} [shape={shape}, label=\"q{s}\"];");
    }
    let _ = writeln!(out, "  init -> q{};", dfa.initial);
    for s in 0..dfa.num_states {
        for letter in dfa.alphabet.letters() {
            let t = dfa.step(s, letter);
            let _ = writeln!(
                out,
                "  q{s} -> q{t} [label=\"{}\"];",
                dfa.alphabet.letter_label(letter)
            );
        }
    }
    out.push_str("}\n");
    out
}

pub fn nfa_to_dot(nfa: &Nfa) -> String {
    let mut out = String::from("digraph nfa {\n  rankdir=LR;\n");
    let _ = writeln!(out, "  init [shape=point];");
    for s in 0..nfa.num_states {
        let shape = if nfa.finals.contains(&s) { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  q{s} [shape={shape}, label=\"q{s}\"];");
    }
    for &s in &nfa.initial {
        let _ = writeln!(out, "  init -> q{s};");
    }
    for s in 0..nfa.num_states {
        for letter in nfa.alphabet.letters() {
            for &t in &nfa.transitions[s][letter as usize] {
                let _ = writeln!(
                    out,
                    "  q{s} -> q{t} [label=\"{}\"];",
                    nfa.alphabet.letter_label(letter)
                );
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{eval_finite, parse_finite, Dialect, FiniteFormula};

    fn ab() -> Alphabet {
        Alphabet::new([Atom::new("p").unwrap(), Atom::new("q").unwrap()])
    }

    fn ab1() -> Alphabet {
        Alphabet::new([Atom::new("p").unwrap()])
    }

    /// All non-empty words up to `max_len` over the alphabet.
    fn words(alphabet: &Alphabet, max_len: usize) -> Vec<Vec<Letter>> {
        let mut out: Vec<Vec<Letter>> = vec![vec![]];
        let mut frontier = out.clone();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for a in alphabet.letters() {
                    let mut w2 = w.clone();
                    w2.push(a);
                    next.push(w2);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out.retain(|w| !w.is_empty());
        out
    }

    fn trace(alphabet: &Alphabet, word: &[Letter]) -> Vec<Valuation> {
        word.iter().map(|&a| alphabet.valuation(a)).collect()
    }

    fn check_ltlf(text: &str, alphabet: &Alphabet) {
        let phi = parse_finite(text, Dialect::Ltlf).unwrap();
        let nfa = ltlf_to_nfa(&phi, alphabet);
        let dfa = nfa_to_dfa(&nfa);
        for w in words(alphabet, 4) {
            let expected = eval_finite(&phi, Dialect::Ltlf, &trace(alphabet, &w)).unwrap();
            assert_eq!(nfa.accepts(&w), expected, "NFA vs semantics on {text} / {w:?}");
            assert_eq!(
                dfa_accepts(&dfa, &w).unwrap(),
                expected,
                "DFA vs semantics on {text} / {w:?}"
            );
        }
    }

    fn check_ppltl(text: &str, alphabet: &Alphabet) {
        let phi = parse_finite(text, Dialect::Ppltl).unwrap();
        let dfa = ppltl_to_dfa(&phi, alphabet);
        for w in words(alphabet, 4) {
            let expected = eval_finite(&phi, Dialect::Ppltl, &trace(alphabet, &w)).unwrap();
            assert_eq!(
                dfa_accepts(&dfa, &w).unwrap(),
                expected,
                "DFA vs semantics on {text} / {w:?}"
            );
        }
    }

    #[test]
    fn ltlf_examples_match_semantics() {
        let a2 = ab();
        for text in [
            "p", "F p", "false", "true", "last", "X p", "WX p", "G p",
            "p U q", "G(p -> F q)", "!(p U q)", "F(last & p)", "p <-> X q",
        ] {
            check_ltlf(text, &a2);
        }
    }

    #[test]
    fn ppltl_examples_match_semantics() {
        let a2 = ab();
        for text in [
            "p", "O p", "false", "true", "first", "Y p", "H p", "p S q",
            "H(p -> O q)", "!(p S q)", "Y(Y p)", "first <-> H p",
        ] {
            check_ppltl(text, &a2);
        }
    }

    #[test]
    fn ltlf_false_has_empty_language() {
        let a = ab1();
        let nfa = ltlf_to_nfa(&FiniteFormula::False, &a);
        for w in words(&a, 3) {
            assert!(!nfa.accepts(&w));
        }
    }

    #[test]
    fn ppltl_atom_dfa_shape() {
        // three states: fresh initial, p-last, not-p-last
        let a = ab1();
        let phi = FiniteFormula::atom("p");
        let dfa = ppltl_to_dfa(&phi, &a);
        assert_eq!(dfa.num_states, 3);
        assert_eq!(dfa.finals.len(), 1);
        // from every state, the letter decides the successor's finality
        for s in 0..dfa.num_states {
            assert!(dfa.is_final(dfa.step(s, 1)));
            assert!(!dfa.is_final(dfa.step(s, 0)));
        }
        assert!(dfa_accepts(&dfa, &[1]).unwrap());
        assert!(!dfa_accepts(&dfa, &[0]).unwrap());
        assert!(!dfa_accepts(&dfa, &[1, 0]).unwrap());
    }

    #[test]
    fn ppltl_yesterday_true_counts_length() {
        let a = ab1();
        let dfa = ppltl_to_dfa(&parse_finite("Y true", Dialect::Ppltl).unwrap(), &a);
        for w in words(&a, 4) {
            assert_eq!(dfa_accepts(&dfa, &w).unwrap(), w.len() >= 2);
        }
    }

    #[test]
    fn ppltl_state_bound() {
        let a = ab();
        for text in ["p S q", "H(p -> O q)", "!(p S (q | Y p))", "first & p"] {
            let phi = parse_finite(text, Dialect::Ppltl).unwrap();
            let dfa = ppltl_to_dfa(&phi, &a);
            let bound = (1usize << subformula_count(&phi)) + 1;
            assert!(dfa.num_states <= bound, "{text}: {} > {bound}", dfa.num_states);
        }
    }

    #[test]
    fn ppltl_initial_has_no_incoming() {
        let a = ab();
        for text in ["p", "p S q", "H(p -> O q)"] {
            let dfa = ppltl_to_dfa(&parse_finite(text, Dialect::Ppltl).unwrap(), &a);
            let incoming = dfa
                .transitions
                .iter()
                .any(|row| row.contains(&dfa.initial));
            assert!(!incoming);
            // normalize_initial is the identity here
            assert_eq!(normalize_initial(&dfa).num_states, dfa.num_states);
        }
    }

    #[test]
    fn normalize_initial_dup() {
        // one-state all-accepting DFA gains a fresh initial copy
        let a = ab1();
        let dfa = Dfa {
            alphabet: a.clone(),
            num_states: 1,
            initial: 0,
            transitions: vec![vec![0, 0]],
            finals: BTreeSet::from([0]),
        };
        let out = normalize_initial(&dfa);
        assert_eq!(out.num_states, 2);
        assert_eq!(out.initial, 1);
        assert!(out.is_final(1));
        let incoming = out.transitions.iter().any(|row| row.contains(&out.initial));
        assert!(!incoming);
        for w in words(&a, 4) {
            assert_eq!(dfa_accepts(&out, &w).unwrap(), dfa_accepts(&dfa, &w).unwrap());
        }
    }

    #[test]
    fn dfa_run_and_errors() {
        let a = ab1();
        let dfa = ppltl_to_dfa(&FiniteFormula::atom("p"), &a);
        let run = dfa_run(&dfa, &[1, 0]).unwrap();
        assert_eq!(run.len(), 3);
        assert_eq!(run[0], dfa.initial);
        assert!(matches!(dfa_accepts(&dfa, &[7]), Err(Error::UnknownLetter { .. })));
    }

    #[test]
    fn subset_finality_matches_nfa_finals() {
        // hand NFA over one atom: state 0 -p-> 1(final); subsets {0},{1},{} reachable
        let a = ab1();
        let nfa = Nfa {
            alphabet: a.clone(),
            num_states: 2,
            initial: vec![0],
            transitions: vec![vec![vec![], vec![1]], vec![vec![], vec![]]],
            finals: BTreeSet::from([1]),
        };
        let dfa = nfa_to_dfa(&nfa);
        for w in words(&a, 4) {
            assert_eq!(dfa_accepts(&dfa, &w).unwrap(), nfa.accepts(&w));
        }
        // exactly the subset containing state 1 is final
        assert_eq!(dfa.finals.len(), 1);
    }

    #[test]
    fn minimize_preserves_language() {
        let a = ab();
        for text in ["G(p -> F q)", "p U (q & X p)", "F(last & p)"] {
            let phi = parse_finite(text, Dialect::Ltlf).unwrap();
            let dfa = nfa_to_dfa(&ltlf_to_nfa(&phi, &a));
            let min = minimize(&dfa);
            assert!(min.num_states <= dfa.num_states);
            for w in words(&a, 4) {
                assert_eq!(dfa_accepts(&min, &w).unwrap(), dfa_accepts(&dfa, &w).unwrap());
            }
        }
    }

    #[test]
    fn product_shapes() {
        let a = ab1();
        let d1 = ppltl_to_dfa(&FiniteFormula::atom("p"), &a);
        // product of one system is isomorphic to the input
        let (p1, tuples) = product(&[&d1]).unwrap();
        assert_eq!(p1.num_states, d1.num_states);
        assert_eq!(tuples.len(), d1.num_states);
        // two systems: runs project to component runs
        let d2 = ppltl_to_dfa(&parse_finite("Y p", Dialect::Ppltl).unwrap(), &a);
        let (p2, tuples2) = product(&[&d1, &d2]).unwrap();
        assert!(p2.num_states <= d1.num_states * d2.num_states);
        for w in words(&a, 4) {
            let run = dfa_run(&p2, &w).unwrap();
            let r1 = dfa_run(&d1, &w).unwrap();
            let r2 = dfa_run(&d2, &w).unwrap();
            for (i, &s) in run.iter().enumerate() {
                assert_eq!(tuples2[s], vec![r1[i], r2[i]]);
            }
        }
        // mismatched alphabets are rejected
        let d3 = ppltl_to_dfa(&FiniteFormula::atom("p"), &ab());
        assert!(matches!(product(&[&d1, &d3]), Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn alphabet_projection() {
        let a = ab();
        let mut v = Valuation::new();
        v.insert(Atom::new("q").unwrap());
        v.insert(Atom::new("zz").unwrap()); // outside the alphabet, ignored
        let letter = a.project(&v);
        assert_eq!(a.valuation(letter), BTreeSet::from([Atom::new("q").unwrap()]));
    }
}
