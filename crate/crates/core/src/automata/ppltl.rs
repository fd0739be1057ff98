//! PPLTL to DFA. A state records which subformulas hold on the word read
//! so far; reading a letter updates the set bottom-up. The initial state
//! is a separate marker for the empty word and has no incoming edges.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::automata::{Alphabet, Dfa, Letter, StateId};
use crate::formula::FiniteFormula;

/// All subformulas, children before parents.
pub(crate) fn subformulas(phi: &FiniteFormula) -> Vec<FiniteFormula> {
    fn walk(phi: &FiniteFormula, out: &mut Vec<FiniteFormula>) {
        use FiniteFormula::*;
        match phi {
            Atom(_) | True | False | First => {}
            Not(p) | Yesterday(p) | Once(p) | Historically(p) => walk(p, out),
            And(p, q) | Or(p, q) | Implies(p, q) | Iff(p, q) | Since(p, q) => {
                walk(p, out);
                walk(q, out);
            }
            Next(_) | WeakNext(_) | Until(_, _) | Eventually(_) | Always(_) | Last => {
                unreachable!("future operator in PPLTL compilation")
            }
        }
        if !out.contains(phi) {
            out.push(phi.clone());
        }
    }
    let mut out = Vec::new();
    walk(phi, &mut out);
    out
}

pub(crate) type SubSet = BTreeSet<usize>;

/// Which subformulas hold after extending a word by `letter`, given the
/// set that held before (`None` for the empty word).
pub(crate) fn update(
    subs: &[FiniteFormula],
    sub_index: &HashMap<FiniteFormula, usize>,
    prev: Option<&SubSet>,
    letter: Letter,
    alphabet: &Alphabet,
) -> SubSet {
    use FiniteFormula::*;
    let mut now = SubSet::new();
    for (i, psi) in subs.iter().enumerate() {
        let held = |phi: &FiniteFormula| -> bool {
            prev.is_some_and(|p| p.contains(&sub_index[phi]))
        };
        let holds_now = |phi: &FiniteFormula, now: &SubSet| now.contains(&sub_index[phi]);
        let holds = match psi {
            Atom(a) => {
                let idx = alphabet.atom_index(a).expect("atom in alphabet");
                alphabet.letter_contains(letter, idx)
            }
            True => true,
            False => false,
            Not(p) => !holds_now(p, &now),
            And(p, q) => holds_now(p, &now) && holds_now(q, &now),
            Or(p, q) => holds_now(p, &now) || holds_now(q, &now),
            Implies(p, q) => !holds_now(p, &now) || holds_now(q, &now),
            Iff(p, q) => holds_now(p, &now) == holds_now(q, &now),
            Yesterday(p) => prev.is_some() && held(p),
            Since(p, q) => {
                holds_now(q, &now) || (holds_now(p, &now) && prev.is_some() && held(psi))
            }
            Once(p) => holds_now(p, &now) || (prev.is_some() && held(psi)),
            Historically(p) => holds_now(p, &now) && (prev.is_none() || held(psi)),
            First => prev.is_none(),
            _ => unreachable!(),
        };
        if holds {
            now.insert(i);
        }
    }
    now
}

/// Compile a PPLTL formula into a DFA accepting exactly its finite
/// models among non-empty words over the given alphabet.
pub fn ppltl_to_dfa(phi: &FiniteFormula, alphabet: &Alphabet) -> Dfa {
    let subs = subformulas(phi);
    let sub_index: HashMap<FiniteFormula, usize> =
        subs.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let root = sub_index[phi];

    let nletters = alphabet.letter_count();
    let initial: StateId = 0;
    let mut index: HashMap<SubSet, StateId> = HashMap::new();
    let mut sets: Vec<Option<SubSet>> = vec![None]; // None marks the initial state
    let mut transitions: Vec<Vec<StateId>> = Vec::new();

    let mut queue = VecDeque::from([initial]);
    while let Some(s) = queue.pop_front() {
        let mut row = Vec::with_capacity(nletters);
        for letter in 0..nletters as Letter {
            let next = update(&subs, &sub_index, sets[s].as_ref(), letter, alphabet);
            let next_id = *index.entry(next.clone()).or_insert_with(|| {
                sets.push(Some(next));
                queue.push_back(sets.len() - 1);
                sets.len() - 1
            });
            row.push(next_id);
        }
        transitions.push(row);
    }

    let finals = sets
        .iter()
        .enumerate()
        .filter(|(_, set)| set.as_ref().is_some_and(|x| x.contains(&root)))
        .map(|(i, _)| i)
        .collect();
    Dfa {
        alphabet: alphabet.clone(),
        num_states: sets.len(),
        initial,
        transitions,
        finals,
    }
}

/// Reachable-state bound check helper: |sub(phi)|.
pub fn subformula_count(phi: &FiniteFormula) -> usize {
    subformulas(phi).len()
}
