//! On-the-fly product arena: component states are computed on demand
//! from the compiled trackers (NFA subsets for the future dialect,
//! subformula sets for the past dialect) and memoized, so the explicit
//! product is never built upfront.

use std::collections::{BTreeSet, HashMap};

use crate::automata::{ltlf_to_nfa, ppltl, Alphabet, Letter, Nfa, StateId};
use crate::error::Error;
use crate::formula::{
    BoolFn, Dialect, FiniteFormula, LabelSet, PnfSkeleton, Quantifier,
};

/// One component state. `Init` is the fresh initial state (empty word
/// read), guaranteed to have no incoming transitions; `Set` is an NFA
/// subset (future dialect) or a held-subformula set (past dialect).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum CompState {
    Init,
    Set(BTreeSet<usize>),
}

enum Tracker {
    Ltlf {
        nfa: Nfa,
    },
    Ppltl {
        subs: Vec<FiniteFormula>,
        sub_index: HashMap<FiniteFormula, usize>,
        root: usize,
    },
}

pub struct LazyComponent {
    pub quantifier: Quantifier,
    tracker: Tracker,
}

impl LazyComponent {
    fn new(
        quantifier: Quantifier,
        phi: &FiniteFormula,
        dialect: Dialect,
        alphabet: &Alphabet,
    ) -> LazyComponent {
        let tracker = match dialect {
            Dialect::Ltlf => Tracker::Ltlf { nfa: ltlf_to_nfa(phi, alphabet) },
            Dialect::Ppltl => {
                let subs = ppltl::subformulas(phi);
                let sub_index: HashMap<FiniteFormula, usize> =
                    subs.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
                let root = sub_index[phi];
                Tracker::Ppltl { subs, sub_index, root }
            }
        };
        LazyComponent { quantifier, tracker }
    }

    /// Finality of the state in the unmodified component automaton.
    fn base_final(&self, state: &CompState) -> bool {
        match (&self.tracker, state) {
            (Tracker::Ltlf { nfa }, CompState::Init) => {
                nfa.initial.iter().any(|s| nfa.finals.contains(s))
            }
            (Tracker::Ltlf { nfa }, CompState::Set(set)) => {
                set.iter().any(|s| nfa.finals.contains(s))
            }
            (Tracker::Ppltl { .. }, CompState::Init) => false,
            (Tracker::Ppltl { root, .. }, CompState::Set(set)) => set.contains(root),
        }
    }

    /// Finality after the quantifier's bookkeeping adjustment of the
    /// final set at the initial state.
    fn adjusted_final(&self, state: &CompState) -> bool {
        let base = self.base_final(state);
        match self.quantifier {
            Quantifier::Safe => base || *state == CompState::Init,
            Quantifier::Guar => base && *state != CompState::Init,
            Quantifier::Recu | Quantifier::Pers => base,
        }
    }

    pub fn marked(&self, state: &CompState) -> bool {
        let f = self.adjusted_final(state);
        if self.quantifier == Quantifier::Pers {
            !f
        } else {
            f
        }
    }

    fn raw_step(&self, state: &CompState, letter: Letter, alphabet: &Alphabet) -> CompState {
        match &self.tracker {
            Tracker::Ltlf { nfa } => {
                let sources: Vec<StateId> = match state {
                    CompState::Init => nfa.initial.clone(),
                    CompState::Set(set) => set.iter().copied().collect(),
                };
                let mut next = BTreeSet::new();
                for s in sources {
                    next.extend(nfa.transitions[s][letter as usize].iter().copied());
                }
                CompState::Set(next)
            }
            Tracker::Ppltl { subs, sub_index, .. } => {
                let prev = match state {
                    CompState::Init => None,
                    CompState::Set(set) => Some(set),
                };
                CompState::Set(ppltl::update(subs, sub_index, prev, letter, alphabet))
            }
        }
    }

    /// Successor in the quantifier-adjusted component: sink states
    /// (non-accepting under safety, accepting under guarantee) absorb.
    pub fn step(&self, state: &CompState, letter: Letter, alphabet: &Alphabet) -> CompState {
        let f = self.adjusted_final(state);
        match self.quantifier {
            Quantifier::Safe if !f => state.clone(),
            Quantifier::Guar if f => state.clone(),
            _ => self.raw_step(state, letter, alphabet),
        }
    }
}

/// The lazy product arena: states are discovered through
/// `lazy_successor` and identified by dense ids in discovery order.
pub struct LazyArena {
    pub alphabet: Alphabet,
    pub components: Vec<LazyComponent>,
    pub condition: BoolFn,
    pub initial: usize,
    states: Vec<Vec<CompState>>,
    index: HashMap<Vec<CompState>, usize>,
    succ_memo: HashMap<(usize, Letter), usize>,
    labels: Vec<LabelSet>,
}

impl LazyArena {
    pub fn new(skeleton: &PnfSkeleton, dialect: Dialect, alphabet: &Alphabet) -> LazyArena {
        let components: Vec<LazyComponent> = skeleton
            .atoms
            .iter()
            .map(|a| LazyComponent::new(a.quantifier, &a.formula, dialect, alphabet))
            .collect();
        let persistence: BTreeSet<usize> = components
            .iter()
            .enumerate()
            .filter(|(_, c)| c.quantifier.is_persistence())
            .map(|(i, _)| i)
            .collect();
        let condition = skeleton.skeleton.negate_vars(&persistence);
        let initial_tuple: Vec<CompState> =
            components.iter().map(|_| CompState::Init).collect();
        let labels = vec![labels_of_tuple(&components, &initial_tuple)];
        let mut index = HashMap::new();
        index.insert(initial_tuple.clone(), 0);
        LazyArena {
            alphabet: alphabet.clone(),
            components,
            condition,
            initial: 0,
            states: vec![initial_tuple],
            index,
            succ_memo: HashMap::new(),
            labels,
        }
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    /// Number of product states discovered so far.
    pub fn num_discovered(&self) -> usize {
        self.states.len()
    }

    pub fn tuple(&self, state: usize) -> &[CompState] {
        &self.states[state]
    }

    pub fn lazy_successor(&mut self, state: usize, letter: Letter) -> Result<usize, Error> {
        if letter as usize >= self.alphabet.letter_count() {
            return Err(Error::UnknownLetter {
                letter,
                atoms: self.alphabet.atoms().len(),
            });
        }
        if let Some(&t) = self.succ_memo.get(&(state, letter)) {
            return Ok(t);
        }
        let next: Vec<CompState> = self.states[state]
            .iter()
            .zip(&self.components)
            .map(|(s, c)| c.step(s, letter, &self.alphabet))
            .collect();
        let t = match self.index.get(&next) {
            Some(&t) => t,
            None => {
                let t = self.states.len();
                self.labels.push(labels_of_tuple(&self.components, &next));
                self.index.insert(next.clone(), t);
                self.states.push(next);
                t
            }
        };
        self.succ_memo.insert((state, letter), t);
        Ok(t)
    }

    pub fn labels_of(&self, state: usize) -> LabelSet {
        self.labels[state]
    }

    /// Force exploration of every reachable state and return the full
    /// transition table, indexed [state][letter].
    pub fn explore(&mut self) -> Result<Vec<Vec<usize>>, Error> {
        let nletters = self.alphabet.letter_count();
        let mut transitions: Vec<Vec<usize>> = Vec::new();
        let mut s = 0;
        while s < self.states.len() {
            let mut row = Vec::with_capacity(nletters);
            for letter in 0..nletters as Letter {
                row.push(self.lazy_successor(s, letter)?);
            }
            transitions.push(row);
            s += 1;
        }
        Ok(transitions)
    }
}

fn labels_of_tuple(components: &[LazyComponent], tuple: &[CompState]) -> LabelSet {
    let mut labels = LabelSet::EMPTY;
    for (i, (s, c)) in tuple.iter().zip(components).enumerate() {
        if c.marked(s) {
            labels.insert(i);
        }
    }
    labels
}
