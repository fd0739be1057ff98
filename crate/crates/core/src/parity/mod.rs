//! Conversion of Emerson-Lei automata to parity automata via
//! permutation-and-pointer states, and parity acceptance on lassos.
//!
//! A permutation records the order in which labels last recurred; the
//! pointer marks the rightmost position touched by the previous state's
//! labels. The pointer value -1 (with colors shifted up by one compared
//! to the unshifted coloring) covers transitions on an empty label set,
//! so the empty separated set is representable.

pub mod game;

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::arena::ElAutomaton;
use crate::automata::{Alphabet, Letter, StateId};
use crate::error::Error;
use crate::formula::LabelSet;
use crate::util::lasso_inf_states;

/// A permutation of the labels [0, k), viewed as a string.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(k: usize) -> Permutation {
        Permutation((0..k).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The set of the first `n` elements.
    pub fn prefix_set(&self, n: usize) -> LabelSet {
        let mut set = LabelSet::EMPTY;
        for &l in &self.0[..n] {
            set.insert(l);
        }
        set
    }

    /// Does the permutation display X, i.e. do X's elements occupy the
    /// leftmost |X| positions?
    pub fn displays(&self, x: LabelSet) -> bool {
        self.prefix_set(x.len()) == x
    }
}

/// Push the elements of X all the way to the left, preserving relative
/// order within X and within its complement.
pub fn lsh(pi: &Permutation, x: LabelSet) -> Permutation {
    let mut left: Vec<usize> = Vec::with_capacity(pi.len());
    let mut right: Vec<usize> = Vec::new();
    for &l in &pi.0 {
        if x.contains(l) {
            left.push(l);
        } else {
            right.push(l);
        }
    }
    left.extend(right);
    Permutation(left)
}

/// The maximal position of an element of X in pi; -1 when X is empty.
pub fn max_pos(x: LabelSet, pi: &Permutation) -> i32 {
    pi.0.iter()
        .rposition(|&l| x.contains(l))
        .map(|h| h as i32)
        .unwrap_or(-1)
}

/// A state of the parity automaton: base EL state, permutation, pointer.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PointerState {
    pub base: StateId,
    pub perm: Permutation,
    pub ptr: i32,
}

impl PointerState {
    /// The unique set separated by (perm, ptr): the first ptr+1 elements.
    pub fn separated_set(&self) -> LabelSet {
        self.perm.prefix_set((self.ptr + 1) as usize)
    }
}

/// Deterministic parity automaton over pointer states. Acceptance: the
/// largest color seen infinitely often is even.
#[derive(Clone, Debug)]
pub struct ParityAutomaton {
    pub alphabet: Alphabet,
    pub arity: usize,
    pub states: Vec<PointerState>,
    pub initial: StateId,
    pub transitions: Vec<Vec<StateId>>,
    pub colors: Vec<u32>,
}

impl ParityAutomaton {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn step(&self, state: StateId, letter: Letter) -> StateId {
        self.transitions[state][letter as usize]
    }
}

/// Convert an EL automaton into an equivalent parity automaton over the
/// reachable pointer states. Colors are 2|X_s|+2 when the condition
/// holds on the separated set X_s and 2|X_s|+1 otherwise.
pub fn el_to_parity(automaton: &ElAutomaton) -> ParityAutomaton {
    let k = automaton.arity();
    let alphabet = automaton.alphabet().clone();
    let nletters = alphabet.letter_count();

    let initial_state = PointerState {
        base: automaton.initial,
        perm: Permutation::identity(k),
        ptr: -1,
    };
    let mut index: HashMap<PointerState, StateId> = HashMap::new();
    let mut states: Vec<PointerState> = vec![initial_state.clone()];
    index.insert(initial_state, 0);
    let mut transitions: Vec<Vec<StateId>> = Vec::new();

    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        let source = states[id].clone();
        let source_labels = automaton.labels[source.base];
        let next_perm = lsh(&source.perm, source_labels);
        let next_ptr = max_pos(source_labels, &source.perm);
        let mut row = Vec::with_capacity(nletters);
        for letter in 0..nletters as Letter {
            let next = PointerState {
                base: automaton.step(source.base, letter),
                perm: next_perm.clone(),
                ptr: next_ptr,
            };
            let next_id = *index.entry(next.clone()).or_insert_with(|| {
                states.push(next);
                queue.push_back(states.len() - 1);
                states.len() - 1
            });
            row.push(next_id);
        }
        transitions.push(row);
    }

    let colors = states
        .iter()
        .map(|s| {
            let x = s.separated_set();
            let base = 2 * x.len() as u32;
            if automaton.condition.eval(x) {
                base + 2
            } else {
                base + 1
            }
        })
        .collect();
    ParityAutomaton {
        alphabet,
        arity: k,
        states,
        initial: 0,
        transitions,
        colors,
    }
}

/// Parity acceptance of the lasso u v^omega.
pub fn parity_accepts_lasso(
    automaton: &ParityAutomaton,
    stem: &[Letter],
    cycle: &[Letter],
) -> Result<bool, Error> {
    if cycle.is_empty() {
        return Err(Error::EmptyCycle);
    }
    let inf = lasso_inf_states(automaton.initial, |&s, a| automaton.step(s, a), stem, cycle);
    let max_color = inf.iter().map(|&s| automaton.colors[s]).max().unwrap();
    Ok(max_color % 2 == 0)
}

pub fn parity_to_dot(automaton: &ParityAutomaton) -> String {
    let mut out = String::from("digraph parity {\n  rankdir=LR;\n");
    let _ = writeln!(out, "  init [shape=point];");
    for (s, state) in automaton.states.iter().enumerate() {
        let perm: Vec<String> = state.perm.0.iter().map(|l| l.to_string()).collect();
        let _ = writeln!(
            out,
            "  q{s} [shape=circle, label=\"q{}\\npi={} h={}\\nc={}\"];",
            state.base,
            perm.join(""),
            state.ptr,
            automaton.colors[s]
        );
    }
    let _ = writeln!(out, "  init -> q{};", automaton.initial);
    for s in 0..automaton.num_states() {
        for letter in automaton.alphabet.letters() {
            let t = automaton.step(s, letter);
            let _ = writeln!(
                out,
                "  q{s} -> q{t} [label=\"{}\"];",
                automaton.alphabet.letter_label(letter)
            );
        }
    }
    out.push_str("}\n");
    out
}
