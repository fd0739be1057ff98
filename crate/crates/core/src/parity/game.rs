//! Parity games: the alternating agent/env expansion of a parity
//! automaton and a recursive attractor-based solver that returns
//! winning regions and positional strategies for both players.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::automata::{Letter, StateId};
use crate::error::Error;
use crate::formula::Atom;
use crate::parity::ParityAutomaton;

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Player {
    /// The agent; wins when the maximal recurring color is even.
    Even,
    Odd,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Even => Player::Odd,
            Player::Odd => Player::Even,
        }
    }

    pub fn wins_color(self, color: u32) -> bool {
        color.is_multiple_of(2) == (self == Player::Even)
    }
}

/// A finite parity game in adjacency-list form. Every vertex must have
/// at least one successor.
#[derive(Clone, Debug)]
pub struct ParityGame {
    pub owner: Vec<Player>,
    pub color: Vec<u32>,
    pub succ: Vec<Vec<usize>>,
}

impl ParityGame {
    pub fn num_vertices(&self) -> usize {
        self.owner.len()
    }

    pub fn validate(&self) -> Result<(), Error> {
        let n = self.num_vertices();
        if self.color.len() != n || self.succ.len() != n {
            return Err(Error::MalformedGame("inconsistent vertex arrays".to_string()));
        }
        for (v, succ) in self.succ.iter().enumerate() {
            if succ.is_empty() {
                return Err(Error::MalformedGame(format!("vertex {v} has no successor")));
            }
            if succ.iter().any(|&t| t >= n) {
                return Err(Error::MalformedGame(format!("vertex {v} has a dangling edge")));
            }
        }
        Ok(())
    }

    fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut preds = vec![Vec::new(); self.num_vertices()];
        for (v, succ) in self.succ.iter().enumerate() {
            for &w in succ {
                preds[w].push(v);
            }
        }
        preds
    }
}

/// Winning regions and positional strategies. `strategy[v]` is the
/// chosen successor when `v` is owned by `winner[v]`, `None` otherwise.
#[derive(Clone, Debug)]
pub struct Solution {
    pub winner: Vec<Player>,
    pub strategy: Vec<Option<usize>>,
}

impl Solution {
    pub fn region(&self, player: Player) -> Vec<usize> {
        self.winner
            .iter()
            .enumerate()
            .filter(|(_, &w)| w == player)
            .map(|(v, _)| v)
            .collect()
    }
}

/// Attractor of `target` for `player` within `alive`. Returns the
/// attracted set and, for player-owned vertices attracted via an edge,
/// that edge as a strategy.
fn attractor(
    game: &ParityGame,
    preds: &[Vec<usize>],
    alive: &[bool],
    target: &[bool],
    player: Player,
) -> (Vec<bool>, Vec<Option<usize>>) {
    let n = game.num_vertices();
    let mut in_attr = target.to_vec();
    let mut strat = vec![None; n];
    let mut cnt: Vec<usize> = (0..n)
        .map(|v| game.succ[v].iter().filter(|&&t| alive[t]).count())
        .collect();
    let mut queue: VecDeque<usize> =
        (0..n).filter(|&v| in_attr[v] && alive[v]).collect();
    while let Some(w) = queue.pop_front() {
        for &v in &preds[w] {
            if !alive[v] || in_attr[v] {
                continue;
            }
            if game.owner[v] == player {
                in_attr[v] = true;
                strat[v] = Some(w);
                queue.push_back(v);
            } else {
                cnt[v] -= 1;
                if cnt[v] == 0 {
                    in_attr[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    for v in 0..n {
        in_attr[v] = in_attr[v] && alive[v];
    }
    (in_attr, strat)
}

fn solve_rec(
    game: &ParityGame,
    preds: &[Vec<usize>],
    alive: &[bool],
    winner: &mut [Player],
    strategy: &mut [Option<usize>],
) {
    let n = game.num_vertices();
    let Some(d) = (0..n).filter(|&v| alive[v]).map(|v| game.color[v]).max() else {
        return;
    };
    let p = if d % 2 == 0 { Player::Even } else { Player::Odd };

    let target: Vec<bool> = (0..n).map(|v| alive[v] && game.color[v] == d).collect();
    let (a_set, a_strat) = attractor(game, preds, alive, &target, p);
    let sub_alive: Vec<bool> = (0..n).map(|v| alive[v] && !a_set[v]).collect();
    solve_rec(game, preds, &sub_alive, winner, strategy);

    let opp = p.other();
    let opp_wins_sub = (0..n).any(|v| sub_alive[v] && winner[v] == opp);
    if !opp_wins_sub {
        // p wins everywhere among alive
        for v in 0..n {
            if !alive[v] || !a_set[v] {
                continue;
            }
            winner[v] = p;
            strategy[v] = if game.owner[v] == p {
                if target[v] {
                    game.succ[v].iter().find(|&&t| alive[t]).copied()
                } else {
                    a_strat[v]
                }
            } else {
                None
            };
        }
        return;
    }

    let opp_region: Vec<bool> =
        (0..n).map(|v| sub_alive[v] && winner[v] == opp).collect();
    let (b_set, b_strat) = attractor(game, preds, alive, &opp_region, opp);
    for v in 0..n {
        if alive[v] && b_set[v] && !opp_region[v] {
            winner[v] = opp;
            strategy[v] = if game.owner[v] == opp { b_strat[v] } else { None };
        }
        // vertices in opp_region keep their subgame assignment
    }
    let rest: Vec<bool> = (0..n).map(|v| alive[v] && !b_set[v]).collect();
    solve_rec(game, preds, &rest, winner, strategy);
}

/// Solve a parity game: regions partition the vertex set and each
/// returned strategy is positional and winning on its owner's region.
pub fn solve_parity_game(game: &ParityGame) -> Result<Solution, Error> {
    game.validate()?;
    let n = game.num_vertices();
    let preds = game.predecessors();
    let mut winner = vec![Player::Even; n];
    let mut strategy = vec![None; n];
    let alive = vec![true; n];
    solve_rec(game, &preds, &alive, &mut winner, &mut strategy);
    Ok(Solution { winner, strategy })
}

/// The alternating turn game over a parity automaton: the agent fixes
/// its atoms first, the environment answers, and the joint valuation
/// drives the automaton. Env vertices inherit the source state's color.
#[derive(Clone, Debug)]
pub struct TurnGame {
    pub game: ParityGame,
    /// Parity-automaton state underlying each vertex.
    pub state_of: Vec<StateId>,
    /// None for agent vertices; the pending agent move for env vertices.
    pub pending_move: Vec<Option<Letter>>,
    pub initial: usize,
    /// All agent moves (subsets of the agent atoms), ascending.
    pub agent_moves: Vec<Letter>,
    /// All env moves (subsets of the env atoms), ascending.
    pub env_moves: Vec<Letter>,
    pub agent_vertex: HashMap<StateId, usize>,
}

fn submasks(mask: Letter) -> Vec<Letter> {
    // ascending enumeration of all subsets of mask
    let mut out = vec![0];
    let mut sub = mask;
    loop {
        if sub != 0 {
            out.push(sub);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & mask;
    }
    out.sort_unstable();
    out
}

/// Build the reachable turn game for the given partition of the
/// automaton's atoms into agent-controlled and environment-controlled.
pub fn build_turn_game(
    automaton: &ParityAutomaton,
    agent_atoms: &[Atom],
) -> Result<TurnGame, Error> {
    let mut agent_mask: Letter = 0;
    for atom in agent_atoms {
        let idx = automaton
            .alphabet
            .atom_index(atom)
            .ok_or_else(|| Error::BadPartition(format!("unknown agent atom {atom}")))?;
        agent_mask |= 1 << idx;
    }
    let env_mask = (automaton.alphabet.letter_count() as Letter - 1) & !agent_mask;
    let agent_moves = submasks(agent_mask);
    let env_moves = submasks(env_mask);

    let mut owner = Vec::new();
    let mut color = Vec::new();
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut state_of = Vec::new();
    let mut pending_move = Vec::new();
    let mut agent_vertex: HashMap<StateId, usize> = HashMap::new();
    let mut env_vertex: HashMap<(StateId, Letter), usize> = HashMap::new();

    let mut queue: VecDeque<usize> = VecDeque::new();
    let push_agent =
        |s: StateId,
         owner: &mut Vec<Player>,
         color: &mut Vec<u32>,
         succ: &mut Vec<Vec<usize>>,
         state_of: &mut Vec<StateId>,
         pending_move: &mut Vec<Option<Letter>>,
         agent_vertex: &mut HashMap<StateId, usize>,
         queue: &mut VecDeque<usize>| {
            *agent_vertex.entry(s).or_insert_with(|| {
                let v = owner.len();
                owner.push(Player::Even);
                color.push(automaton.colors[s]);
                succ.push(Vec::new());
                state_of.push(s);
                pending_move.push(None);
                queue.push_back(v);
                v
            })
        };

    let initial = push_agent(
        automaton.initial,
        &mut owner,
        &mut color,
        &mut succ,
        &mut state_of,
        &mut pending_move,
        &mut agent_vertex,
        &mut queue,
    );
    while let Some(v) = queue.pop_front() {
        let s = state_of[v];
        match pending_move[v] {
            None => {
                let mut row = Vec::with_capacity(agent_moves.len());
                for &x in &agent_moves {
                    let e = *env_vertex.entry((s, x)).or_insert_with(|| {
                        let e = owner.len();
                        owner.push(Player::Odd);
                        color.push(automaton.colors[s]);
                        succ.push(Vec::new());
                        state_of.push(s);
                        pending_move.push(Some(x));
                        queue.push_back(e);
                        e
                    });
                    row.push(e);
                }
                succ[v] = row;
            }
            Some(x) => {
                let mut row = Vec::with_capacity(env_moves.len());
                for &y in &env_moves {
                    let t = automaton.step(s, x | y);
                    let w = push_agent(
                        t,
                        &mut owner,
                        &mut color,
                        &mut succ,
                        &mut state_of,
                        &mut pending_move,
                        &mut agent_vertex,
                        &mut queue,
                    );
                    row.push(w);
                }
                succ[v] = row;
            }
        }
    }

    Ok(TurnGame {
        game: ParityGame { owner, color, succ },
        state_of,
        pending_move,
        initial,
        agent_moves,
        env_moves,
        agent_vertex,
    })
}

pub fn game_to_dot(turn: &TurnGame, solution: Option<&Solution>) -> String {
    let mut out = String::from("digraph game {\n  rankdir=LR;\n");
    for v in 0..turn.game.num_vertices() {
        let shape = match turn.game.owner[v] {
            Player::Even => "box",
            Player::Odd => "diamond",
        };
        let fill = match solution.map(|s| s.winner[v]) {
            Some(Player::Even) => ", style=filled, fillcolor=palegreen",
            Some(Player::Odd) => ", style=filled, fillcolor=lightpink",
            None => "",
        };
        let _ = writeln!(
            out,
            "  v{v} [shape={shape}, label=\"q{} c={}\"{}];",
            turn.state_of[v], turn.game.color[v], fill
        );
    }
    for v in 0..turn.game.num_vertices() {
        for (i, &w) in turn.game.succ[v].iter().enumerate() {
            let chosen = solution
                .map(|s| s.strategy[v] == Some(w) && s.winner[v] == turn.game.owner[v])
                .unwrap_or(false);
            let style = if chosen { " [penwidth=3, color=blue]" } else { "" };
            let _ = writeln!(out, "  v{v} -> v{w}{style}; // move {i}");
        }
    }
    out.push_str("}\n");
    out
}
