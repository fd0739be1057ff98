//! Shared helpers for the integration suites: seeded random formulas,
//! automata, and games, plus a brute-force parity-game solver.
#![allow(dead_code)]

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use plusynt::parity::game::{ParityGame, Player};
use plusynt::{Alphabet, Atom, BoolFn, Dialect, ElAutomaton, FiniteFormula, LabelSet, PlusFormula, Quantifier};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn atoms(names: &[&str]) -> Vec<Atom> {
    names.iter().map(|n| Atom::new(n).unwrap()).collect()
}

/// Random finite-trace formula in the given dialect.
pub fn random_finite(
    rng: &mut ChaCha8Rng,
    dialect: Dialect,
    names: &[&str],
    depth: u32,
) -> FiniteFormula {
    use FiniteFormula::*;
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..4) {
            0 | 1 => FiniteFormula::atom(names[rng.gen_range(0..names.len())]),
            2 => True,
            _ => match dialect {
                Dialect::Ltlf => Last,
                Dialect::Ppltl => First,
            },
        };
    }
    let op = rng.gen_range(0..8);
    let p = Box::new(random_finite(rng, dialect, names, depth - 1));
    let q = Box::new(random_finite(rng, dialect, names, depth - 1));
    match (dialect, op) {
        (_, 0) => Not(p),
        (_, 1) => And(p, q),
        (_, 2) => Or(p, q),
        (_, 3) => Implies(p, q),
        (Dialect::Ltlf, 4) => Next(p),
        (Dialect::Ltlf, 5) => Until(p, q),
        (Dialect::Ltlf, 6) => Eventually(p),
        (Dialect::Ltlf, _) => Always(p),
        (Dialect::Ppltl, 4) => Yesterday(p),
        (Dialect::Ppltl, 5) => Since(p, q),
        (Dialect::Ppltl, 6) => Once(p),
        (Dialect::Ppltl, _) => Historically(p),
    }
}

/// Random plus-level formula with at most `quants` quantified atoms.
pub fn random_plus(
    rng: &mut ChaCha8Rng,
    dialect: Dialect,
    names: &[&str],
    quants: u32,
    depth: u32,
) -> PlusFormula {
    if quants <= 1 || depth == 0 || rng.gen_bool(0.4) {
        let q = match rng.gen_range(0..4) {
            0 => Quantifier::Safe,
            1 => Quantifier::Guar,
            2 => Quantifier::Recu,
            _ => Quantifier::Pers,
        };
        let d = rng.gen_range(0..=depth.min(3));
        let phi = random_finite(rng, dialect, names, d);
        let leaf = PlusFormula::quantified(q, phi);
        return if rng.gen_bool(0.3) { leaf.not() } else { leaf };
    }
    let left = random_plus(rng, dialect, names, quants / 2, depth - 1);
    let right = random_plus(rng, dialect, names, quants - quants / 2, depth - 1);
    let node = if rng.gen_bool(0.5) { left.and(right) } else { left.or(right) };
    if rng.gen_bool(0.2) { node.not() } else { node }
}

/// Random Boolean function over `k` variables.
pub fn random_boolfn(rng: &mut ChaCha8Rng, k: usize, depth: u32) -> BoolFn {
    if k == 0 {
        return if rng.gen_bool(0.5) { BoolFn::True } else { BoolFn::False };
    }
    if depth == 0 || rng.gen_bool(0.35) {
        return BoolFn::Var(rng.gen_range(0..k));
    }
    match rng.gen_range(0..3) {
        0 => BoolFn::Not(Box::new(random_boolfn(rng, k, depth - 1))),
        1 => BoolFn::And(
            Box::new(random_boolfn(rng, k, depth - 1)),
            Box::new(random_boolfn(rng, k, depth - 1)),
        ),
        _ => BoolFn::Or(
            Box::new(random_boolfn(rng, k, depth - 1)),
            Box::new(random_boolfn(rng, k, depth - 1)),
        ),
    }
}

/// Random hand-built Emerson-Lei automaton over a one-atom alphabet.
pub fn random_el(rng: &mut ChaCha8Rng, max_states: usize, k: usize) -> ElAutomaton {
    let n = rng.gen_range(1..=max_states);
    let alphabet = Alphabet::new([Atom::new("p").unwrap()]);
    let letters = alphabet.letter_count();
    let transitions: Vec<Vec<usize>> = (0..n)
        .map(|_| (0..letters).map(|_| rng.gen_range(0..n)).collect())
        .collect();
    let labels: Vec<LabelSet> = (0..n)
        .map(|_| LabelSet(rng.gen_range(0..(1u32 << k))))
        .collect();
    ElAutomaton {
        alphabet,
        components: Vec::new(),
        tuples: vec![Vec::new(); n],
        initial: rng.gen_range(0..n),
        transitions,
        labels,
        condition: random_boolfn(rng, k, 3),
        arity: k,
    }
}

/// Random total parity game with bounded out-degree.
pub fn random_game(rng: &mut ChaCha8Rng, max_vertices: usize, max_color: u32) -> ParityGame {
    let n = rng.gen_range(1..=max_vertices);
    let owner = (0..n)
        .map(|_| if rng.gen_bool(0.5) { Player::Even } else { Player::Odd })
        .collect();
    let color = (0..n).map(|_| rng.gen_range(0..=max_color)).collect();
    let succ = (0..n)
        .map(|_| {
            let d = rng.gen_range(1..=3.min(n));
            let mut out: Vec<usize> = (0..d).map(|_| rng.gen_range(0..n)).collect();
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect();
    ParityGame { owner, color, succ }
}

/// Does the sigma-restricted graph contain a cycle with odd maximal
/// color reachable from `from`? `succ` already reflects Even's choices.
fn odd_cycle_reachable(succ: &[Vec<usize>], colors: &[u32], from: usize) -> bool {
    let n = succ.len();
    let mut reach = vec![false; n];
    let mut stack = vec![from];
    reach[from] = true;
    while let Some(v) = stack.pop() {
        for &w in &succ[v] {
            if !reach[w] {
                reach[w] = true;
                stack.push(w);
            }
        }
    }
    let odd_colors: Vec<u32> = colors.iter().copied().filter(|c| c % 2 == 1).collect();
    for &c in &odd_colors {
        let keep: Vec<bool> = (0..n).map(|v| reach[v] && colors[v] <= c).collect();
        let sub: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                if keep[v] {
                    succ[v].iter().copied().filter(|&w| keep[w]).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        for comp in tarjan(&sub) {
            let cyclic = comp.len() > 1 || sub[comp[0]].contains(&comp[0]);
            if cyclic && comp.iter().any(|&v| keep[v] && colors[v] == c) {
                return true;
            }
        }
    }
    false
}

/// Brute-force winner from each vertex: enumerate all positional Even
/// strategies; Even wins wherever some strategy leaves no reachable
/// odd-dominated cycle.
pub fn brute_force_winners(game: &ParityGame) -> Vec<Player> {
    let n = game.num_vertices();
    let even_vs: Vec<usize> = (0..n).filter(|&v| game.owner[v] == Player::Even).collect();
    let mut winners = vec![Player::Odd; n];
    let mut choice = vec![0usize; even_vs.len()];
    loop {
        let succ: Vec<Vec<usize>> = (0..n)
            .map(|v| match even_vs.iter().position(|&e| e == v) {
                Some(i) => vec![game.succ[v][choice[i]]],
                None => game.succ[v].clone(),
            })
            .collect();
        for (v, w) in winners.iter_mut().enumerate() {
            if *w == Player::Odd && !odd_cycle_reachable(&succ, &game.color, v) {
                *w = Player::Even;
            }
        }
        // next strategy in mixed-radix order
        let mut i = 0;
        loop {
            if i == even_vs.len() {
                return winners;
            }
            choice[i] += 1;
            if choice[i] < game.succ[even_vs[i]].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    // iterative Tarjan, local to the test helpers
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next = 0usize;
    let mut out = Vec::new();
    #[derive(Clone)]
    enum Frame {
        Enter(usize),
        Resume(usize, usize),
    }
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call = vec![Frame::Enter(root)];
        while let Some(frame) = call.pop() {
            match frame {
                Frame::Enter(v) => {
                    index[v] = next;
                    low[v] = next;
                    next += 1;
                    stack.push(v);
                    on_stack[v] = true;
                    call.push(Frame::Resume(v, 0));
                }
                Frame::Resume(v, mut i) => {
                    let mut descended = false;
                    while i < adj[v].len() {
                        let w = adj[v][i];
                        i += 1;
                        if index[w] == usize::MAX {
                            call.push(Frame::Resume(v, i));
                            call.push(Frame::Enter(w));
                            descended = true;
                            break;
                        }
                        if on_stack[w] {
                            low[v] = low[v].min(index[w]);
                        }
                    }
                    if descended {
                        continue;
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        out.push(comp);
                    }
                    if let Some(Frame::Resume(p, _)) = call.last().cloned() {
                        low[p] = low[p].min(low[v]);
                    }
                }
            }
        }
    }
    out
}
