//! Reactive synthesis, satisfiability, validity, and model checking for
//! the prefix-quantified extensions of the finite-trace temporal logics
//! LTLf and PPLTL. The pipeline: finite-trace formulas compile to DFAs,
//! quantifier surgery yields labeled components, their product is an
//! Emerson-Lei automaton, which converts to a parity automaton and, with
//! an agent/environment split of the atoms, a parity game.

pub mod arena;
pub mod automata;
pub mod error;
pub mod formula;
pub mod parity;
pub mod reasoning;
pub mod synthesis;
pub(crate) mod util;

pub use arena::{
    apply_quantifier, build_el_automaton, el_accepts_lasso, ElAutomaton, QuantifiedComponent,
};
pub use automata::{Alphabet, Dfa, Letter, Nfa, StateId};
pub use error::Error;
pub use formula::{
    eval_finite, parse_finite, parse_plus, to_pnf, Atom, BoolFn, Dialect, FiniteFormula,
    LabelSet, PlusFormula, PnfSkeleton, Quantifier, Valuation,
};
pub use parity::game::{build_turn_game, solve_parity_game, ParityGame, Player, Solution};
pub use parity::{el_to_parity, parity_accepts_lasso, ParityAutomaton};
pub use reasoning::{
    eval_plus, is_satisfiable, is_valid, model_check, Counterexample, LassoWitness,
    LazyArena, PlusEvaluator, TransitionSystemInput,
};
pub use synthesis::{synthesize, verify_strategy, MealyStrategy, Partition, SynthesisResult};
