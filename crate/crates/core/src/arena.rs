//! Quantifier transformations of component DFAs and the product
//! Emerson-Lei automaton over them.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::automata::{self, Dfa, Letter, StateId};
use crate::error::Error;
use crate::formula::{BoolFn, LabelSet, PnfSkeleton, Quantifier};
use crate::util::lasso_inf_states;

/// One quantified component: the surgically adjusted transition system
/// D'_i with its bookkeeping finals F'_i and the marked states whose
/// recurrence the Emerson-Lei labeling tracks.
#[derive(Clone, Debug)]
pub struct QuantifiedComponent {
    pub quantifier: Quantifier,
    /// D'_i; `finals` holds F'_i.
    pub dfa: Dfa,
    pub marked: BTreeSet<StateId>,
}

/// Apply the per-quantifier surgery to a DFA whose initial state has no
/// incoming transitions.
pub fn apply_quantifier(dfa: &Dfa, quantifier: Quantifier) -> Result<QuantifiedComponent, Error> {
    let incoming = dfa
        .transitions
        .iter()
        .any(|row| row.contains(&dfa.initial));
    if incoming {
        return Err(Error::InitialNotFresh);
    }
    let mut out = dfa.clone();
    match quantifier {
        Quantifier::Recu | Quantifier::Pers => {}
        Quantifier::Safe => {
            out.finals.insert(out.initial);
            for s in 0..out.num_states {
                if !out.finals.contains(&s) {
                    for t in out.transitions[s].iter_mut() {
                        *t = s; // non-final states become sinks
                    }
                }
            }
        }
        Quantifier::Guar => {
            out.finals.remove(&out.initial);
            for s in 0..out.num_states {
                if out.finals.contains(&s) {
                    for t in out.transitions[s].iter_mut() {
                        *t = s; // final states become sinks
                    }
                }
            }
        }
    }
    let marked = if quantifier == Quantifier::Pers {
        (0..out.num_states).filter(|s| !out.finals.contains(s)).collect()
    } else {
        out.finals.clone()
    };
    Ok(QuantifiedComponent { quantifier, dfa: out, marked })
}

/// Does the ultimately periodic trace u v^omega satisfy the component's
/// objective O_i?
pub fn lasso_satisfies_component(
    component: &QuantifiedComponent,
    stem: &[Letter],
    cycle: &[Letter],
) -> Result<bool, Error> {
    if cycle.is_empty() {
        return Err(Error::EmptyCycle);
    }
    let inf = lasso_inf_states(
        component.dfa.initial,
        |&s, a| component.dfa.step(s, a),
        stem,
        cycle,
    );
    let hits_final = inf.iter().any(|s| component.dfa.finals.contains(s));
    Ok(match component.quantifier {
        // inf(rho) disjoint from the non-final states
        Quantifier::Pers => inf.iter().all(|s| component.dfa.finals.contains(s)),
        _ => hits_final,
    })
}

/// The product Emerson-Lei automaton: deterministic product of the
/// quantified components with labels naming the components currently in
/// a marked state and the skeleton's Boolean function (persistence
/// indices negated).
#[derive(Clone, Debug)]
pub struct ElAutomaton {
    pub alphabet: automata::Alphabet,
    /// Empty for hand-built automata; filled by `build_el_automaton`.
    pub components: Vec<QuantifiedComponent>,
    /// Reachable product states as component tuples.
    pub tuples: Vec<Vec<StateId>>,
    pub initial: StateId,
    pub transitions: Vec<Vec<StateId>>,
    pub labels: Vec<LabelSet>,
    pub condition: BoolFn,
    /// Number of labels k; labels range over [0, k).
    pub arity: usize,
}

impl ElAutomaton {
    pub fn alphabet(&self) -> &automata::Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.tuples.len()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn step(&self, state: StateId, letter: Letter) -> StateId {
        self.transitions[state][letter as usize]
    }
}

/// Labels of a component tuple, recomputed from the markings.
pub fn labels_of_tuple(components: &[QuantifiedComponent], tuple: &[StateId]) -> LabelSet {
    let mut labels = LabelSet::EMPTY;
    for (i, (&s, c)) in tuple.iter().zip(components).enumerate() {
        if c.marked.contains(&s) {
            labels.insert(i);
        }
    }
    labels
}

pub fn build_el_automaton(
    components: Vec<QuantifiedComponent>,
    skeleton: &PnfSkeleton,
) -> Result<ElAutomaton, Error> {
    if components.len() != skeleton.arity() {
        return Err(Error::IndexMisalignment {
            components: components.len(),
            arity: skeleton.arity(),
        });
    }
    let dfas: Vec<&Dfa> = components.iter().map(|c| &c.dfa).collect();
    let (product, tuples) = automata::product(&dfas)?;
    let labels = tuples
        .iter()
        .map(|tuple| labels_of_tuple(&components, tuple))
        .collect();
    let persistence: BTreeSet<usize> = components
        .iter()
        .enumerate()
        .filter(|(_, c)| c.quantifier.is_persistence())
        .map(|(i, _)| i)
        .collect();
    let condition = skeleton.skeleton.negate_vars(&persistence);
    let arity = components.len();
    Ok(ElAutomaton {
        alphabet: product.alphabet,
        arity,
        components,
        tuples,
        initial: product.initial,
        transitions: product.transitions,
        labels,
        condition,
    })
}

/// Emerson-Lei acceptance of the lasso u v^omega: the labels visited
/// infinitely often must satisfy the condition.
pub fn el_accepts_lasso(
    automaton: &ElAutomaton,
    stem: &[Letter],
    cycle: &[Letter],
) -> Result<bool, Error> {
    if cycle.is_empty() {
        return Err(Error::EmptyCycle);
    }
    let inf = lasso_inf_states(automaton.initial, |&s, a| automaton.step(s, a), stem, cycle);
    let mut labels = LabelSet::EMPTY;
    for s in inf {
        labels = labels.union(automaton.labels[s]);
    }
    Ok(automaton.condition.eval(labels))
}

pub fn el_to_dot(automaton: &ElAutomaton) -> String {
    let mut out = String::from("digraph el {\n  rankdir=LR;\n");
    let _ = writeln!(out, "  label=\"B = {}\";\n  labelloc=top;", automaton.condition);
    let _ = writeln!(out, "  init [shape=point];");
    for s in 0..automaton.num_states() {
        let labels: Vec<String> =
            automaton.labels[s].iter().map(|i| (i + 1).to_string()).collect();
        let _ = writeln!(
            out,
            "  q{s} [shape=circle, label=\"q{s}\\n{{{}}}\"];",
            labels.join(",")
        );
    }
    let _ = writeln!(out, "  init -> q{};", automaton.initial);
    let alphabet = automaton.alphabet().clone();
    for s in 0..automaton.num_states() {
        for letter in alphabet.letters() {
            let t = automaton.step(s, letter);
            let _ = writeln!(
                out,
                "  q{s} -> q{t} [label=\"{}\"];",
                alphabet.letter_label(letter)
            );
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{normalize_initial, ppltl_to_dfa, Alphabet};
    use crate::formula::{parse_plus, to_pnf, Atom, Dialect, FiniteFormula};

    fn a1() -> Alphabet {
        Alphabet::new([Atom::new("p").unwrap()])
    }

    fn atom_dfa() -> Dfa {
        ppltl_to_dfa(&FiniteFormula::atom("p"), &a1())
    }

    fn state_reading(dfa: &Dfa, letter: Letter) -> StateId {
        dfa.step(dfa.initial, letter)
    }

    #[test]
    fn safe_surgery() {
        let dfa = atom_dfa();
        let c = apply_quantifier(&dfa, Quantifier::Safe).unwrap();
        assert!(c.dfa.finals.contains(&c.dfa.initial));
        let non_final = state_reading(&dfa, 0);
        // the non-final state is now a sink
        for letter in 0..2 {
            assert_eq!(c.dfa.step(non_final, letter), non_final);
        }
        assert_eq!(c.marked, c.dfa.finals);
    }

    #[test]
    fn guar_surgery() {
        let dfa = atom_dfa();
        let c = apply_quantifier(&dfa, Quantifier::Guar).unwrap();
        assert!(!c.dfa.finals.contains(&c.dfa.initial));
        let final_state = state_reading(&dfa, 1);
        for letter in 0..2 {
            assert_eq!(c.dfa.step(final_state, letter), final_state);
        }
        assert_eq!(c.marked, BTreeSet::from([final_state]));
    }

    #[test]
    fn pers_marks_non_finals() {
        let dfa = atom_dfa();
        let c = apply_quantifier(&dfa, Quantifier::Pers).unwrap();
        assert_eq!(c.dfa.transitions, dfa.transitions);
        let expected: BTreeSet<StateId> =
            (0..dfa.num_states).filter(|s| !dfa.finals.contains(s)).collect();
        assert_eq!(c.marked, expected);
    }

    #[test]
    fn rejects_initial_with_incoming() {
        let mut dfa = atom_dfa();
        dfa.transitions[1][0] = dfa.initial;
        assert!(matches!(
            apply_quantifier(&dfa, Quantifier::Safe),
            Err(Error::InitialNotFresh)
        ));
    }

    #[test]
    fn component_lasso_objectives() {
        let dfa = normalize_initial(&atom_dfa());
        let safe = apply_quantifier(&dfa, Quantifier::Safe).unwrap();
        assert!(lasso_satisfies_component(&safe, &[], &[1]).unwrap());
        assert!(!lasso_satisfies_component(&safe, &[0], &[1]).unwrap());
        let pers = apply_quantifier(&dfa, Quantifier::Pers).unwrap();
        assert!(lasso_satisfies_component(&pers, &[0], &[1]).unwrap());
        assert!(!lasso_satisfies_component(&pers, &[], &[1, 0]).unwrap());
        assert!(matches!(
            lasso_satisfies_component(&safe, &[], &[]),
            Err(Error::EmptyCycle)
        ));
    }

    fn arena_for(text: &str) -> ElAutomaton {
        let psi = parse_plus(text, Dialect::Ppltl).unwrap();
        let alphabet = Alphabet::new(psi.atoms());
        let skeleton = to_pnf(&psi);
        let components: Vec<QuantifiedComponent> = skeleton
            .atoms
            .iter()
            .map(|a| {
                let dfa = normalize_initial(&ppltl_to_dfa(&a.formula, &alphabet));
                apply_quantifier(&dfa, a.quantifier).unwrap()
            })
            .collect();
        build_el_automaton(components, &skeleton).unwrap()
    }

    #[test]
    fn condition_substitutes_persistence_indices() {
        assert_eq!(arena_for("recu(p) | pers(q)").condition.to_string(), "(1 | !2)");
        assert_eq!(arena_for("guar(p)").condition.to_string(), "1");
        assert_eq!(arena_for("pers(p) & pers(q)").condition.to_string(), "(!1 & !2)");
    }

    #[test]
    fn labels_match_markings() {
        let a = arena_for("recu(p) | pers(q) & safe(p)");
        for s in 0..a.num_states() {
            assert_eq!(a.labels[s], labels_of_tuple(&a.components, &a.tuples[s]));
        }
    }

    #[test]
    fn el_lasso_acceptance_examples() {
        let recu = arena_for("recu(p)");
        assert!(el_accepts_lasso(&recu, &[], &[1, 0]).unwrap());
        let pers = arena_for("pers(p)");
        assert!(!el_accepts_lasso(&pers, &[], &[1, 0]).unwrap());
        assert!(el_accepts_lasso(&pers, &[0], &[1]).unwrap());
        let safe_true = arena_for("safe(true)"); // empty alphabet: one letter
        assert!(el_accepts_lasso(&safe_true, &[0], &[0, 0]).unwrap());
        assert!(matches!(el_accepts_lasso(&recu, &[], &[]), Err(Error::EmptyCycle)));
    }

    #[test]
    fn sinks_stay_sinks() {
        let a = arena_for("safe(p) & guar(p)");
        for c in &a.components {
            let sinks: Vec<StateId> = (0..c.dfa.num_states)
                .filter(|&s| (0..c.dfa.alphabet.letter_count() as Letter)
                    .all(|l| c.dfa.step(s, l) == s))
                .collect();
            match c.quantifier {
                Quantifier::Safe => {
                    for s in 0..c.dfa.num_states {
                        if !c.dfa.finals.contains(&s) {
                            assert!(sinks.contains(&s));
                        }
                    }
                }
                Quantifier::Guar => {
                    for s in &c.dfa.finals {
                        assert!(sinks.contains(s));
                    }
                }
                _ => {}
            }
        }
    }

    #[test]
    fn misaligned_components_rejected() {
        let psi = parse_plus("recu(p) | pers(q)", Dialect::Ppltl).unwrap();
        let skeleton = to_pnf(&psi);
        let alphabet = Alphabet::new(psi.atoms());
        let dfa = normalize_initial(&ppltl_to_dfa(&FiniteFormula::atom("p"), &alphabet));
        let only_one = vec![apply_quantifier(&dfa, Quantifier::Recu).unwrap()];
        assert!(matches!(
            build_el_automaton(only_one, &skeleton),
            Err(Error::IndexMisalignment { .. })
        ));
    }
}
