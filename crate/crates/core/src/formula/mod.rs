//! Formula ASTs for the finite-trace logics LTLf and PPLTL and the
//! prefix-quantified plus level on top of them, together with Boolean
//! skeletons and positive normal form.

mod eval;
mod parser;
mod pnf;

pub use eval::eval_finite;
pub use parser::{parse_finite, parse_plus};
pub use pnf::to_pnf;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Error;

pub const KEYWORDS: &[&str] = &[
    "true", "false", "last", "first", "X", "WX", "F", "G", "U", "Y", "O", "H", "S", "safe",
    "guar", "recu", "pers",
];

/// An atomic proposition. Names match `[a-z][A-Za-z0-9_]*` and avoid keywords.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(String);

impl Atom {
    pub fn new(name: &str) -> Result<Atom, Error> {
        let mut chars = name.chars();
        let ok = matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(Error::parse(0, format!("invalid atom name {name:?}")));
        }
        if KEYWORDS.contains(&name) {
            return Err(Error::parse(0, format!("atom name {name:?} is a keyword")));
        }
        Ok(Atom(name.to_string()))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A set of atoms, i.e. one position of a trace.
pub type Valuation = BTreeSet<Atom>;

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum Dialect {
    Ltlf,
    Ppltl,
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dialect::Ltlf => f.write_str("ltlf"),
            Dialect::Ppltl => f.write_str("ppltl"),
        }
    }
}

/// A finite-trace formula. Future operators and `last` belong to the LTLf
/// dialect, past operators and `first` to PPLTL; abbreviations (F, G, WX,
/// O, H, last, first, ->, <->) are kept in the tree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum FiniteFormula {
    Atom(Atom),
    True,
    False,
    Not(Box<FiniteFormula>),
    And(Box<FiniteFormula>, Box<FiniteFormula>),
    Or(Box<FiniteFormula>, Box<FiniteFormula>),
    Implies(Box<FiniteFormula>, Box<FiniteFormula>),
    Iff(Box<FiniteFormula>, Box<FiniteFormula>),
    // future
    Next(Box<FiniteFormula>),
    WeakNext(Box<FiniteFormula>),
    Until(Box<FiniteFormula>, Box<FiniteFormula>),
    Eventually(Box<FiniteFormula>),
    Always(Box<FiniteFormula>),
    Last,
    // past
    Yesterday(Box<FiniteFormula>),
    Since(Box<FiniteFormula>, Box<FiniteFormula>),
    Once(Box<FiniteFormula>),
    Historically(Box<FiniteFormula>),
    First,
}

impl FiniteFormula {
    pub fn atom(name: &str) -> FiniteFormula {
        FiniteFormula::Atom(Atom::new(name).expect("valid atom name"))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> FiniteFormula {
        FiniteFormula::Not(Box::new(self))
    }

    pub fn and(self, other: FiniteFormula) -> FiniteFormula {
        FiniteFormula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: FiniteFormula) -> FiniteFormula {
        FiniteFormula::Or(Box::new(self), Box::new(other))
    }

    /// Atoms occurring syntactically in the formula.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        use FiniteFormula::*;
        match self {
            Atom(a) => {
                out.insert(a.clone());
            }
            True | False | Last | First => {}
            Not(p) | Next(p) | WeakNext(p) | Eventually(p) | Always(p) | Yesterday(p)
            | Once(p) | Historically(p) => p.collect_atoms(out),
            And(p, q) | Or(p, q) | Implies(p, q) | Iff(p, q) | Until(p, q) | Since(p, q) => {
                p.collect_atoms(out);
                q.collect_atoms(out);
            }
        }
    }

    /// The dialect the operators of this formula belong to, if any
    /// operator pins it down. Purely propositional formulas fit both.
    pub fn fits_dialect(&self, dialect: Dialect) -> bool {
        use FiniteFormula::*;
        match self {
            Atom(_) | True | False => true,
            Last => dialect == Dialect::Ltlf,
            First => dialect == Dialect::Ppltl,
            Next(p) | WeakNext(p) | Eventually(p) | Always(p) => {
                dialect == Dialect::Ltlf && p.fits_dialect(dialect)
            }
            Yesterday(p) | Once(p) | Historically(p) => {
                dialect == Dialect::Ppltl && p.fits_dialect(dialect)
            }
            Until(p, q) => {
                dialect == Dialect::Ltlf && p.fits_dialect(dialect) && q.fits_dialect(dialect)
            }
            Since(p, q) => {
                dialect == Dialect::Ppltl && p.fits_dialect(dialect) && q.fits_dialect(dialect)
            }
            Not(p) => p.fits_dialect(dialect),
            And(p, q) | Or(p, q) | Implies(p, q) | Iff(p, q) => {
                p.fits_dialect(dialect) && q.fits_dialect(dialect)
            }
        }
    }
}

/// Negation with double-negation elimination only, so the size grows by
/// at most one node.
pub fn negate_finite(phi: &FiniteFormula) -> FiniteFormula {
    match phi {
        FiniteFormula::Not(inner) => (**inner).clone(),
        other => other.clone().not(),
    }
}

impl fmt::Display for FiniteFormula {
    // fully parenthesized so that parse(print(f)) == f structurally
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FiniteFormula::*;
        match self {
            Atom(a) => write!(f, "{a}"),
            True => f.write_str("true"),
            False => f.write_str("false"),
            Last => f.write_str("last"),
            First => f.write_str("first"),
            Not(p) => write!(f, "!{p}"),
            And(p, q) => write!(f, "({p} & {q})"),
            Or(p, q) => write!(f, "({p} | {q})"),
            Implies(p, q) => write!(f, "({p} -> {q})"),
            Iff(p, q) => write!(f, "({p} <-> {q})"),
            Next(p) => write!(f, "X {p}"),
            WeakNext(p) => write!(f, "WX {p}"),
            Until(p, q) => write!(f, "({p} U {q})"),
            Eventually(p) => write!(f, "F {p}"),
            Always(p) => write!(f, "G {p}"),
            Yesterday(p) => write!(f, "Y {p}"),
            Since(p, q) => write!(f, "({p} S {q})"),
            Once(p) => write!(f, "O {p}"),
            Historically(p) => write!(f, "H {p}"),
        }
    }
}

/// Prefix quantifier: every / some / infinitely many / all but finitely
/// many non-empty finite prefixes satisfy the inner formula.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Quantifier {
    Safe,
    Guar,
    Recu,
    Pers,
}

impl Quantifier {
    /// The dual quantifier: ! Q(phi) == dual(Q)(! phi).
    pub fn dual(self) -> Quantifier {
        match self {
            Quantifier::Safe => Quantifier::Guar,
            Quantifier::Guar => Quantifier::Safe,
            Quantifier::Recu => Quantifier::Pers,
            Quantifier::Pers => Quantifier::Recu,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Safe => "safe",
            Quantifier::Guar => "guar",
            Quantifier::Recu => "recu",
            Quantifier::Pers => "pers",
        }
    }
}

/// A Boolean combination of quantified finite-trace formulas.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum PlusFormula {
    Quantified(Quantifier, FiniteFormula),
    Not(Box<PlusFormula>),
    And(Box<PlusFormula>, Box<PlusFormula>),
    Or(Box<PlusFormula>, Box<PlusFormula>),
}

impl PlusFormula {
    pub fn quantified(q: Quantifier, phi: FiniteFormula) -> PlusFormula {
        PlusFormula::Quantified(q, phi)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> PlusFormula {
        PlusFormula::Not(Box::new(self))
    }

    pub fn and(self, other: PlusFormula) -> PlusFormula {
        PlusFormula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: PlusFormula) -> PlusFormula {
        PlusFormula::Or(Box::new(self), Box::new(other))
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            PlusFormula::Quantified(_, phi) => phi.collect_atoms(out),
            PlusFormula::Not(p) => p.collect_atoms(out),
            PlusFormula::And(p, q) | PlusFormula::Or(p, q) => {
                p.collect_atoms(out);
                q.collect_atoms(out);
            }
        }
    }

    pub fn fits_dialect(&self, dialect: Dialect) -> bool {
        match self {
            PlusFormula::Quantified(_, phi) => phi.fits_dialect(dialect),
            PlusFormula::Not(p) => p.fits_dialect(dialect),
            PlusFormula::And(p, q) | PlusFormula::Or(p, q) => {
                p.fits_dialect(dialect) && q.fits_dialect(dialect)
            }
        }
    }
}

impl fmt::Display for PlusFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlusFormula::Quantified(q, phi) => write!(f, "{}({phi})", q.keyword()),
            PlusFormula::Not(p) => write!(f, "!{p}"),
            PlusFormula::And(p, q) => write!(f, "({p} & {q})"),
            PlusFormula::Or(p, q) => write!(f, "({p} | {q})"),
        }
    }
}

/// A set of labels drawn from [0, k), stored as a bitmask.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LabelSet(pub u32);

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);

    pub fn singleton(i: usize) -> LabelSet {
        LabelSet(1 << i)
    }

    pub fn full(k: usize) -> LabelSet {
        LabelSet(((1u64 << k) - 1) as u32)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn union(self, other: LabelSet) -> LabelSet {
        LabelSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: LabelSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A Boolean formula tree over label variables, evaluable on any label set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BoolFn {
    Var(usize),
    True,
    False,
    Not(Box<BoolFn>),
    And(Box<BoolFn>, Box<BoolFn>),
    Or(Box<BoolFn>, Box<BoolFn>),
}

impl BoolFn {
    pub fn eval(&self, z: LabelSet) -> bool {
        match self {
            BoolFn::Var(i) => z.contains(*i),
            BoolFn::True => true,
            BoolFn::False => false,
            BoolFn::Not(p) => !p.eval(z),
            BoolFn::And(p, q) => p.eval(z) && q.eval(z),
            BoolFn::Or(p, q) => p.eval(z) || q.eval(z),
        }
    }

    pub fn contains_negation(&self) -> bool {
        match self {
            BoolFn::Var(_) | BoolFn::True | BoolFn::False => false,
            BoolFn::Not(_) => true,
            BoolFn::And(p, q) | BoolFn::Or(p, q) => {
                p.contains_negation() || q.contains_negation()
            }
        }
    }

    pub fn variables(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<usize>) {
        match self {
            BoolFn::Var(i) => {
                out.insert(*i);
            }
            BoolFn::True | BoolFn::False => {}
            BoolFn::Not(p) => p.collect_vars(out),
            BoolFn::And(p, q) | BoolFn::Or(p, q) => {
                p.collect_vars(out);
                q.collect_vars(out);
            }
        }
    }

    /// Replace every occurrence of a variable in `which` by its negation.
    pub fn negate_vars(&self, which: &BTreeSet<usize>) -> BoolFn {
        match self {
            BoolFn::Var(i) if which.contains(i) => BoolFn::Not(Box::new(BoolFn::Var(*i))),
            BoolFn::Var(i) => BoolFn::Var(*i),
            BoolFn::True => BoolFn::True,
            BoolFn::False => BoolFn::False,
            BoolFn::Not(p) => BoolFn::Not(Box::new(p.negate_vars(which))),
            BoolFn::And(p, q) => BoolFn::And(
                Box::new(p.negate_vars(which)),
                Box::new(q.negate_vars(which)),
            ),
            BoolFn::Or(p, q) => BoolFn::Or(
                Box::new(p.negate_vars(which)),
                Box::new(q.negate_vars(which)),
            ),
        }
    }
}

impl fmt::Display for BoolFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoolFn::Var(i) => write!(f, "{}", i + 1),
            BoolFn::True => f.write_str("true"),
            BoolFn::False => f.write_str("false"),
            BoolFn::Not(p) => write!(f, "!{p}"),
            BoolFn::And(p, q) => write!(f, "({p} & {q})"),
            BoolFn::Or(p, q) => write!(f, "({p} | {q})"),
        }
    }
}

/// One quantified atom of a positive-normal-form skeleton.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PnfAtom {
    pub quantifier: Quantifier,
    pub formula: FiniteFormula,
}

/// Positive normal form of a plus formula: a negation-free Boolean
/// skeleton over indices into `atoms`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PnfSkeleton {
    pub atoms: Vec<PnfAtom>,
    pub skeleton: BoolFn,
}

impl PnfSkeleton {
    pub fn arity(&self) -> usize {
        self.atoms.len()
    }

    /// The plus formula this skeleton denotes, for cross-checks.
    pub fn to_plus(&self) -> PlusFormula {
        self.expand(&self.skeleton)
    }

    fn expand(&self, b: &BoolFn) -> PlusFormula {
        match b {
            BoolFn::Var(i) => PlusFormula::Quantified(
                self.atoms[*i].quantifier,
                self.atoms[*i].formula.clone(),
            ),
            BoolFn::True => {
                PlusFormula::Quantified(Quantifier::Safe, FiniteFormula::True)
            }
            BoolFn::False => {
                PlusFormula::Quantified(Quantifier::Guar, FiniteFormula::False)
            }
            BoolFn::Not(p) => self.expand(p).not(),
            BoolFn::And(p, q) => self.expand(p).and(self.expand(q)),
            BoolFn::Or(p, q) => self.expand(p).or(self.expand(q)),
        }
    }
}
