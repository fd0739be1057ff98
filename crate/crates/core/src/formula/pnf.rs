//! Positive normal form: negations are pushed through the Boolean
//! structure by De Morgan and eliminated at quantified atoms via the
//! dualities safe/guar and recu/pers. Identical (quantifier, formula)
//! pairs share one skeleton index.

use crate::formula::{negate_finite, BoolFn, PlusFormula, PnfAtom, PnfSkeleton, Quantifier};

/// Convert a plus formula into its positive normal form skeleton.
pub fn to_pnf(psi: &PlusFormula) -> PnfSkeleton {
    let mut atoms: Vec<PnfAtom> = Vec::new();
    let skeleton = push(psi, false, &mut atoms);
    PnfSkeleton { atoms, skeleton }
}

fn push(psi: &PlusFormula, negated: bool, atoms: &mut Vec<PnfAtom>) -> BoolFn {
    match psi {
        PlusFormula::Not(inner) => push(inner, !negated, atoms),
        PlusFormula::And(p, q) => {
            let (l, r) = (push(p, negated, atoms), push(q, negated, atoms));
            if negated {
                BoolFn::Or(Box::new(l), Box::new(r))
            } else {
                BoolFn::And(Box::new(l), Box::new(r))
            }
        }
        PlusFormula::Or(p, q) => {
            let (l, r) = (push(p, negated, atoms), push(q, negated, atoms));
            if negated {
                BoolFn::And(Box::new(l), Box::new(r))
            } else {
                BoolFn::Or(Box::new(l), Box::new(r))
            }
        }
        PlusFormula::Quantified(q, phi) => {
            let atom = if negated {
                PnfAtom { quantifier: q.dual(), formula: negate_finite(phi) }
            } else {
                PnfAtom { quantifier: *q, formula: phi.clone() }
            };
            let idx = atoms
                .iter()
                .position(|a| a.quantifier == atom.quantifier && a.formula == atom.formula)
                .unwrap_or_else(|| {
                    atoms.push(atom);
                    atoms.len() - 1
                });
            BoolFn::Var(idx)
        }
    }
}

impl Quantifier {
    /// The Emerson-Lei side of the objective: persistence asks that no
    /// marked state recurs, everything else that some marked state does.
    pub fn is_persistence(self) -> bool {
        self == Quantifier::Pers
    }
}
