//! LTLf to NFA. The formula is first brought into negation normal form
//! (introducing weak next and release as duals), then unfolded letter by
//! letter: each NNF node decomposes, for a given letter, into a set of
//! alternative obligation sets on the strict remainder of the word. NFA
//! states are obligation sets; a run may discharge all obligations (the
//! empty set, which accepts any continuation) or close them exactly at
//! the end of the word (the dedicated `ended` state).

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::automata::{Alphabet, Letter, Nfa, StateId};
use crate::formula::FiniteFormula;

type NodeId = u32;

/// Marker obligation: the remainder of the word must be empty.
const END: NodeId = u32::MAX;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Node {
    Lit { atom: usize, positive: bool },
    True,
    False,
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Next(NodeId),
    WeakNext(NodeId),
    Until(NodeId, NodeId),
    Release(NodeId, NodeId),
}

#[derive(Default)]
struct NnfArena {
    nodes: Vec<Node>,
    index: HashMap<Node, NodeId>,
}

impl NnfArena {
    fn intern(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.nodes.len() as NodeId;
        self.index.insert(node.clone(), id);
        self.nodes.push(node);
        id
    }

    fn build(&mut self, phi: &FiniteFormula, alphabet: &Alphabet, negated: bool) -> NodeId {
        use FiniteFormula::*;
        match (phi, negated) {
            (Atom(a), _) => {
                let atom = alphabet.atom_index(a).expect("atom in alphabet");
                self.intern(Node::Lit { atom, positive: !negated })
            }
            (True, false) | (False, true) => self.intern(Node::True),
            (True, true) | (False, false) => self.intern(Node::False),
            (Not(p), _) => self.build(p, alphabet, !negated),
            (And(p, q), false) | (Or(p, q), true) => {
                let (l, r) = (self.build(p, alphabet, negated), self.build(q, alphabet, negated));
                self.intern(Node::And(l, r))
            }
            (And(p, q), true) | (Or(p, q), false) => {
                let (l, r) = (self.build(p, alphabet, negated), self.build(q, alphabet, negated));
                self.intern(Node::Or(l, r))
            }
            (Implies(p, q), false) => {
                let (l, r) = (self.build(p, alphabet, true), self.build(q, alphabet, false));
                self.intern(Node::Or(l, r))
            }
            (Implies(p, q), true) => {
                let (l, r) = (self.build(p, alphabet, false), self.build(q, alphabet, true));
                self.intern(Node::And(l, r))
            }
            (Iff(p, q), _) => {
                // (p & q) | (!p & !q), negated: (p & !q) | (!p & q)
                let pp = self.build(p, alphabet, false);
                let pn = self.build(p, alphabet, true);
                let qp = self.build(q, alphabet, negated);
                let qn = self.build(q, alphabet, !negated);
                let both = self.intern(Node::And(pp, qp));
                let neither = self.intern(Node::And(pn, qn));
                self.intern(Node::Or(both, neither))
            }
            (Next(p), false) => {
                let inner = self.build(p, alphabet, false);
                self.intern(Node::Next(inner))
            }
            (Next(p), true) => {
                let inner = self.build(p, alphabet, true);
                self.intern(Node::WeakNext(inner))
            }
            (WeakNext(p), false) => {
                let inner = self.build(p, alphabet, false);
                self.intern(Node::WeakNext(inner))
            }
            (WeakNext(p), true) => {
                let inner = self.build(p, alphabet, true);
                self.intern(Node::Next(inner))
            }
            (Until(p, q), false) => {
                let (l, r) = (self.build(p, alphabet, false), self.build(q, alphabet, false));
                self.intern(Node::Until(l, r))
            }
            (Until(p, q), true) => {
                let (l, r) = (self.build(p, alphabet, true), self.build(q, alphabet, true));
                self.intern(Node::Release(l, r))
            }
            (Eventually(p), false) => {
                let t = self.intern(Node::True);
                let inner = self.build(p, alphabet, false);
                self.intern(Node::Until(t, inner))
            }
            (Eventually(p), true) => {
                let f = self.intern(Node::False);
                let inner = self.build(p, alphabet, true);
                self.intern(Node::Release(f, inner))
            }
            (Always(p), false) => {
                let f = self.intern(Node::False);
                let inner = self.build(p, alphabet, false);
                self.intern(Node::Release(f, inner))
            }
            (Always(p), true) => {
                let t = self.intern(Node::True);
                let inner = self.build(p, alphabet, true);
                self.intern(Node::Until(t, inner))
            }
            (Last, false) => {
                let f = self.intern(Node::False);
                self.intern(Node::WeakNext(f))
            }
            (Last, true) => {
                let t = self.intern(Node::True);
                self.intern(Node::Next(t))
            }
            (Yesterday(_) | Since(_, _) | Once(_) | Historically(_) | First, _) => {
                unreachable!("past operator in LTLf compilation")
            }
        }
    }
}

type Obligations = BTreeSet<NodeId>;

/// Alternative obligation sets after reading `letter` at this node.
/// An empty alternative means the node is already discharged; the END
/// marker requires the remainder of the word to be empty.
fn decompose(
    arena: &NnfArena,
    memo: &mut HashMap<(NodeId, Letter), Vec<Obligations>>,
    id: NodeId,
    letter: Letter,
    alphabet: &Alphabet,
) -> Vec<Obligations> {
    if let Some(cached) = memo.get(&(id, letter)) {
        return cached.clone();
    }
    let result = match arena.nodes[id as usize] {
        Node::Lit { atom, positive } => {
            if alphabet.letter_contains(letter, atom) == positive {
                vec![Obligations::new()]
            } else {
                vec![]
            }
        }
        Node::True => vec![Obligations::new()],
        Node::False => vec![],
        Node::And(l, r) => {
            let left = decompose(arena, memo, l, letter, alphabet);
            let right = decompose(arena, memo, r, letter, alphabet);
            let mut out = Vec::new();
            for ml in &left {
                for mr in &right {
                    out.push(ml.union(mr).copied().collect());
                }
            }
            out
        }
        Node::Or(l, r) => {
            let mut out = decompose(arena, memo, l, letter, alphabet);
            out.extend(decompose(arena, memo, r, letter, alphabet));
            out
        }
        Node::Next(p) => vec![BTreeSet::from([p])],
        Node::WeakNext(p) => vec![BTreeSet::from([END]), BTreeSet::from([p])],
        Node::Until(l, r) => {
            // d(q) | (d(p) & X(p U q))
            let mut out = decompose(arena, memo, r, letter, alphabet);
            for mut m in decompose(arena, memo, l, letter, alphabet) {
                m.insert(id);
                out.push(m);
            }
            out
        }
        Node::Release(l, r) => {
            // d(q) & (d(p) | END | X(p R q))
            let right = decompose(arena, memo, r, letter, alphabet);
            let left = decompose(arena, memo, l, letter, alphabet);
            let mut out = Vec::new();
            for mr in &right {
                for ml in &left {
                    out.push(mr.union(ml).copied().collect());
                }
                let mut with_end: Obligations = mr.clone();
                with_end.insert(END);
                out.push(with_end);
                let mut with_self: Obligations = mr.clone();
                with_self.insert(id);
                out.push(with_self);
            }
            out
        }
    };
    let mut dedup = result;
    dedup.sort();
    dedup.dedup();
    memo.insert((id, letter), dedup.clone());
    dedup
}

/// Compile an LTLf formula into an NFA accepting exactly its finite
/// models among non-empty words over the given alphabet.
pub fn ltlf_to_nfa(phi: &FiniteFormula, alphabet: &Alphabet) -> Nfa {
    let mut arena = NnfArena::default();
    let root = arena.build(phi, alphabet, false);

    let nletters = alphabet.letter_count();
    let mut memo: HashMap<(NodeId, Letter), Vec<Obligations>> = HashMap::new();

    // state 0: all obligations met, any continuation accepted
    // state 1: the word must end here
    let empty_state: StateId = 0;
    let ended_state: StateId = 1;
    let mut index: HashMap<Obligations, StateId> = HashMap::new();
    let mut sets: Vec<Obligations> = vec![Obligations::new(), Obligations::new()];
    let initial_set = Obligations::from([root]);
    index.insert(Obligations::new(), empty_state);
    let initial = *index.entry(initial_set.clone()).or_insert_with(|| {
        sets.push(initial_set);
        sets.len() - 1
    });

    let mut transitions: Vec<Vec<Vec<StateId>>> = Vec::new();
    let mut queue: VecDeque<StateId> = VecDeque::from([empty_state, ended_state]);
    if initial != empty_state {
        queue.push_back(initial);
    }
    let mut explored = vec![false; sets.len()];
    while let Some(s) = queue.pop_front() {
        if s >= explored.len() {
            explored.resize(s + 1, false);
        }
        if explored[s] {
            continue;
        }
        explored[s] = true;
        while transitions.len() <= s {
            transitions.push(vec![Vec::new(); nletters]);
        }
        if s == ended_state {
            continue; // the word has ended, no successors
        }
        if s == empty_state {
            for row in transitions[s].iter_mut() {
                *row = vec![empty_state];
            }
            continue;
        }
        for letter in 0..nletters as Letter {
            // combine one alternative per obligation
            let mut combined: Vec<Obligations> = vec![Obligations::new()];
            for &ob in &sets[s] {
                let alts = decompose(&arena, &mut memo, ob, letter, alphabet);
                let mut next = Vec::new();
                for base in &combined {
                    for alt in &alts {
                        next.push(base.union(alt).copied().collect());
                    }
                }
                next.sort();
                next.dedup();
                combined = next;
                if combined.is_empty() {
                    break;
                }
            }
            let mut targets = Vec::new();
            for m in combined {
                let target = if m.contains(&END) {
                    if m.len() == 1 {
                        ended_state
                    } else {
                        continue; // END is incompatible with further obligations
                    }
                } else {
                    *index.entry(m.clone()).or_insert_with(|| {
                        sets.push(m);
                        sets.len() - 1
                    })
                };
                targets.push(target);
            }
            targets.sort_unstable();
            targets.dedup();
            for &t in &targets {
                if t >= explored.len() {
                    explored.resize(t + 1, false);
                }
                if !explored[t] {
                    queue.push_back(t);
                }
            }
            transitions[s][letter as usize] = targets;
        }
    }
    while transitions.len() < sets.len() {
        transitions.push(vec![Vec::new(); nletters]);
    }

    Nfa {
        alphabet: alphabet.clone(),
        num_states: sets.len(),
        initial: vec![initial],
        transitions,
        finals: BTreeSet::from([empty_state, ended_state]),
    }
}
