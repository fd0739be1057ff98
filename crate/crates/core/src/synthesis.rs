//! End-to-end synthesis: formula to PNF, component DFAs, product
//! Emerson-Lei arena, parity game, and extraction of a verified Mealy
//! controller.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde_json::json;

use crate::arena::{apply_quantifier, build_el_automaton, QuantifiedComponent};
use crate::automata::{ltlf_to_nfa, nfa_to_dfa, normalize_initial, ppltl_to_dfa};
use crate::automata::{minimize, Alphabet, Dfa, Letter, StateId};
use crate::error::Error;
use crate::formula::{to_pnf, Atom, Dialect, FiniteFormula, PlusFormula, Valuation};
use crate::parity::game::{build_turn_game, solve_parity_game, Player, Solution, TurnGame};
use crate::parity::{el_to_parity, ParityAutomaton};

/// Partition of the atoms into agent-controlled and env-controlled.
/// Atoms not declared agent-controlled default to the environment.
#[derive(Clone, Debug, Default)]
pub struct Partition {
    pub agent: Vec<Atom>,
    pub env: Vec<Atom>,
}

impl Partition {
    pub fn validate(&self) -> Result<(), Error> {
        for a in &self.agent {
            if self.env.contains(a) {
                return Err(Error::BadPartition(format!(
                    "atom {a} declared both agent- and env-controlled"
                )));
            }
        }
        Ok(())
    }
}

/// A finite-state controller over parity-automaton states: an agent move
/// per state, updated on the env move.
#[derive(Clone, Debug)]
pub struct MealyStrategy {
    pub alphabet: Alphabet,
    pub agent_atoms: Vec<Atom>,
    pub env_atoms: Vec<Atom>,
    /// Parity-automaton state behind each strategy state.
    pub parity_states: Vec<StateId>,
    pub initial: usize,
    /// Agent move per state, as a letter over the full alphabet.
    pub output: Vec<Letter>,
    /// next[state][env move index] = successor state.
    pub next: Vec<Vec<usize>>,
    /// All env moves, ascending.
    pub env_moves: Vec<Letter>,
}

#[derive(Clone, Debug)]
pub enum SynthesisResult {
    Realizable(MealyStrategy),
    Unrealizable,
}

/// Compile one finite-trace formula into a DFA with a fresh initial state.
pub fn compile_finite(
    phi: &FiniteFormula,
    dialect: Dialect,
    alphabet: &Alphabet,
    minimized: bool,
) -> Dfa {
    let dfa = match dialect {
        Dialect::Ltlf => nfa_to_dfa(&ltlf_to_nfa(phi, alphabet)),
        Dialect::Ppltl => ppltl_to_dfa(phi, alphabet),
    };
    let dfa = if minimized { minimize(&dfa) } else { dfa };
    normalize_initial(&dfa)
}

/// All pipeline stages of one synthesis run, kept for inspection.
pub struct Pipeline {
    pub components: Vec<QuantifiedComponent>,
    pub el: crate::arena::ElAutomaton,
    pub parity: ParityAutomaton,
    pub game: TurnGame,
    pub solution: Solution,
}

pub fn build_pipeline(
    psi: &PlusFormula,
    dialect: Dialect,
    partition: &Partition,
    minimized: bool,
) -> Result<Pipeline, Error> {
    partition.validate()?;
    let mut atoms = psi.atoms();
    atoms.extend(partition.agent.iter().cloned());
    atoms.extend(partition.env.iter().cloned());
    let alphabet = Alphabet::new(atoms);

    let skeleton = to_pnf(psi);
    // one compile per distinct finite-trace formula, then per-quantifier surgery
    let mut base: HashMap<&FiniteFormula, Dfa> = HashMap::new();
    let mut components = Vec::with_capacity(skeleton.arity());
    for atom in &skeleton.atoms {
        let dfa = base
            .entry(&atom.formula)
            .or_insert_with(|| compile_finite(&atom.formula, dialect, &alphabet, minimized))
            .clone();
        components.push(apply_quantifier(&dfa, atom.quantifier)?);
    }
    let el = build_el_automaton(components.clone(), &skeleton)?;
    let parity = el_to_parity(&el);
    let game = build_turn_game(&parity, &partition.agent)?;
    let solution = solve_parity_game(&game.game)?;
    Ok(Pipeline { components, el, parity, game, solution })
}

/// Decide realizability and extract a verified controller.
pub fn synthesize(
    psi: &PlusFormula,
    dialect: Dialect,
    partition: &Partition,
) -> Result<SynthesisResult, Error> {
    let pipeline = build_pipeline(psi, dialect, partition, false)?;
    if pipeline.solution.winner[pipeline.game.initial] != Player::Even {
        return Ok(SynthesisResult::Unrealizable);
    }
    let strategy = extract_strategy(&pipeline.game, &pipeline.solution, &pipeline.parity, partition)?;
    debug_assert!(verify_strategy(&strategy, &pipeline.parity));
    Ok(SynthesisResult::Realizable(strategy))
}

/// Project the positional game strategy onto parity-automaton states,
/// restricted to the states reachable under it.
pub fn extract_strategy(
    game: &TurnGame,
    solution: &Solution,
    parity: &ParityAutomaton,
    partition: &Partition,
) -> Result<MealyStrategy, Error> {
    if solution.winner[game.initial] != Player::Even {
        return Err(Error::Unrealizable);
    }
    let mut state_index: HashMap<StateId, usize> = HashMap::new();
    let mut parity_states: Vec<StateId> = Vec::new();
    let mut output: Vec<Letter> = Vec::new();
    let mut next: Vec<Vec<usize>> = Vec::new();

    let initial_state = game.state_of[game.initial];
    state_index.insert(initial_state, 0);
    parity_states.push(initial_state);
    let mut queue = VecDeque::from([initial_state]);
    while let Some(s) = queue.pop_front() {
        let id = state_index[&s];
        let agent_v = game.agent_vertex[&s];
        let env_v = solution.strategy[agent_v].ok_or(Error::Unrealizable)?;
        let x = game.pending_move[env_v].expect("agent strategy edge leads to env vertex");
        let mut row = Vec::with_capacity(game.env_moves.len());
        for &y in &game.env_moves {
            let t = parity.step(s, x | y);
            let t_id = *state_index.entry(t).or_insert_with(|| {
                parity_states.push(t);
                queue.push_back(t);
                parity_states.len() - 1
            });
            row.push(t_id);
        }
        while output.len() <= id {
            output.push(0);
            next.push(Vec::new());
        }
        output[id] = x;
        next[id] = row;
    }

    let mut env_atoms: Vec<Atom> = parity
        .alphabet
        .atoms()
        .iter()
        .filter(|a| !partition.agent.contains(a))
        .cloned()
        .collect();
    env_atoms.sort();
    Ok(MealyStrategy {
        alphabet: parity.alphabet.clone(),
        agent_atoms: partition.agent.clone(),
        env_atoms,
        parity_states,
        initial: 0,
        output,
        next,
        env_moves: game.env_moves.clone(),
    })
}

/// Soundness check: with the agent moves fixed by the controller, every
/// cycle reachable under any env behavior must have even maximal color.
pub fn verify_strategy(strategy: &MealyStrategy, parity: &ParityAutomaton) -> bool {
    let n = strategy.parity_states.len();
    let adj: Vec<Vec<usize>> = strategy.next.iter().map(|row| {
        let mut targets: Vec<usize> = row.clone();
        targets.sort_unstable();
        targets.dedup();
        targets
    }).collect();
    let colors: Vec<u32> = strategy
        .parity_states
        .iter()
        .map(|&s| parity.colors[s])
        .collect();
    // no cycle may have an odd maximal color: for every odd color c, the
    // subgraph of states with color <= c must not contain a cycle
    // through a state of color exactly c
    let odd_colors: BTreeSet<u32> = colors.iter().copied().filter(|c| c % 2 == 1).collect();
    for &c in &odd_colors {
        let keep: Vec<bool> = colors.iter().map(|&col| col <= c).collect();
        let sub_adj: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                if keep[v] {
                    adj[v].iter().copied().filter(|&t| keep[t]).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        for component in crate::util::tarjan_scc(&sub_adj) {
            let cyclic = component.len() > 1
                || sub_adj[component[0]].contains(&component[0]);
            if cyclic && component.iter().any(|&v| keep[v] && colors[v] == c) {
                return false;
            }
        }
    }
    true
}

impl MealyStrategy {
    /// The agent move emitted in `state`, as a set of agent atoms.
    pub fn output_valuation(&self, state: usize) -> Valuation {
        self.alphabet.valuation(self.output[state])
    }

    /// Advance on an env move given as a set of env atoms.
    pub fn advance(&self, state: usize, env_move: &Valuation) -> usize {
        let y = self.alphabet.project(env_move);
        let idx = self
            .env_moves
            .iter()
            .position(|&m| m == y)
            .expect("env move over env atoms");
        self.next[state][idx]
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut output = serde_json::Map::new();
        let mut delta = serde_json::Map::new();
        for state in 0..self.parity_states.len() {
            let atoms: Vec<String> = self
                .alphabet
                .valuation(self.output[state])
                .iter()
                .map(|a| a.name().to_string())
                .collect();
            output.insert(state.to_string(), json!(atoms));
            let mut row = serde_json::Map::new();
            for (i, &y) in self.env_moves.iter().enumerate() {
                let key: Vec<String> = self
                    .alphabet
                    .valuation(y)
                    .iter()
                    .map(|a| a.name().to_string())
                    .collect();
                row.insert(key.join(","), json!(self.next[state][i]));
            }
            delta.insert(state.to_string(), serde_json::Value::Object(row));
        }
        json!({
            "states": (0..self.parity_states.len()).collect::<Vec<usize>>(),
            "initial": self.initial,
            "output": output,
            "delta": delta,
        })
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph mealy {\n  rankdir=LR;\n");
        let _ = writeln!(out, "  init [shape=point];\n  init -> s{};", self.initial);
        for state in 0..self.parity_states.len() {
            let _ = writeln!(
                out,
                "  s{state} [shape=circle, label=\"s{state} / {}\"];",
                self.alphabet.letter_label(self.output[state])
            );
        }
        for state in 0..self.parity_states.len() {
            for (i, &y) in self.env_moves.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "  s{state} -> s{} [label=\"{}\"];",
                    self.next[state][i],
                    self.alphabet.letter_label(y)
                );
            }
        }
        out.push_str("}\n");
        out
    }
}
