//! Composite expressions and the canonical reassociation routine.
//!
//! Weak bases make "insert the obvious associators" ambiguous; this module
//! owns the convention. An [`Expr`] is a bracketed composite of 1-cells;
//! [`normalize`] produces the left-nested normal form together with the
//! invertible 2-cell into it, and [`reassociate`] connects any two
//! bracketings of the same leaf sequence.

use crate::base::{Base, Hom1, Hom2};
use crate::error::{CkError, Result};

/// A bracketed composite. `Pair(g, f)` is `g ∘ f` ("g after f"), matching
/// [`Base::compose1`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Leaf(Hom1),
    Pair(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn leaf(f: &Hom1) -> Expr {
        Expr::Leaf(f.clone())
    }

    pub fn pair(g: Expr, f: Expr) -> Expr {
        Expr::Pair(Box::new(g), Box::new(f))
    }

    /// Left-nested composite of a nonempty sequence, outermost factor first:
    /// `[f1, f2, f3]` becomes `(f1∘f2)∘f3`.
    pub fn chain(factors: &[Hom1]) -> Result<Expr> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| CkError::structural("empty composite expression"))?;
        let mut e = Expr::leaf(first);
        for f in rest {
            e = Expr::pair(e, Expr::leaf(f));
        }
        Ok(e)
    }

    /// Evaluate with exactly this bracketing.
    pub fn eval(&self, b: &Base) -> Result<Hom1> {
        match self {
            Expr::Leaf(f) => Ok(f.clone()),
            Expr::Pair(g, f) => b.compose1(&g.eval(b)?, &f.eval(b)?),
        }
    }

    fn collect<'a>(&'a self, out: &mut Vec<&'a Hom1>) {
        match self {
            Expr::Leaf(f) => out.push(f),
            Expr::Pair(g, f) => {
                g.collect(out);
                f.collect(out);
            }
        }
    }

    /// Leaves in composition order (outermost factor first).
    pub fn leaves(&self) -> Vec<&Hom1> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }
}

/// The invertible 2-cell from `e.eval()` to the left-nested composite of
/// `e.leaves()`, returned as `(normal_form, to_nf, from_nf)`.
pub fn normalize(b: &Base, e: &Expr) -> Result<(Hom1, Hom2, Hom2)> {
    match e {
        Expr::Leaf(f) => {
            let id = b.id2(f)?;
            Ok((f.clone(), id.clone(), id))
        }
        Expr::Pair(g, f) => {
            let (gn, g_to, g_from) = normalize(b, g)?;
            let (fn_, f_to, f_from) = normalize(b, f)?;
            // First rectify both halves, then fold the right-hand leaves in.
            let half_to = b.vcomp(
                &b.whisker_right(&g_to, &fn_)?,
                &b.whisker_left(&g.eval(b)?, &f_to)?,
            )?;
            let half_from = b.vcomp(
                &b.whisker_left(&g.eval(b)?, &f_from)?,
                &b.whisker_right(&g_from, &fn_)?,
            )?;
            let f_leaves = f.leaves();
            let (nf, fold_to, fold_from) = fold_right_leaves(b, &gn, &f_leaves)?;
            Ok((nf, b.vcomp(&fold_to, &half_to)?, b.vcomp(&half_from, &fold_from)?))
        }
    }
}

/// Reassociate `head ∘ (left-nested composite of tail)` into a single
/// left-nested composite, returning the normal form and the iso pair.
fn fold_right_leaves(b: &Base, head: &Hom1, tail: &[&Hom1]) -> Result<(Hom1, Hom2, Hom2)> {
    match tail {
        [] => Err(CkError::structural("composite expression lost its leaves")),
        [last] => {
            let nf = b.compose1(head, last)?;
            let id = b.id2(&nf)?;
            Ok((nf, id.clone(), id))
        }
        [init @ .., last] => {
            // head∘(Y∘last) ⇒ (head∘Y)∘last, then recurse inside the left
            // factor under a right whisker by `last`.
            let mut y = (*init[0]).clone();
            for f in &init[1..] {
                y = b.compose1(&y, f)?;
            }
            let a = b.associator(head, &y, last)?;
            let (inner_nf, inner_to, inner_from) = fold_right_leaves(b, head, init)?;
            let nf = b.compose1(&inner_nf, last)?;
            let to = b.vcomp(&b.whisker_right(&inner_to, last)?, &a.bwd)?;
            let from = b.vcomp(&a.fwd, &b.whisker_right(&inner_from, last)?)?;
            Ok((nf, to, from))
        }
    }
}

/// The canonical invertible 2-cell `from.eval() ⇒ to.eval()` between two
/// bracketings of the same sequence of 1-cells.
pub fn reassociate(b: &Base, from: &Expr, to: &Expr) -> Result<Hom2> {
    if from.leaves() != to.leaves() {
        return Err(CkError::structural(
            "reassociate: expressions have different factor sequences",
        ));
    }
    let (_, to_nf, _) = normalize(b, from)?;
    let (_, _, from_nf) = normalize(b, to)?;
    b.vcomp(&from_nf, &to_nf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{ArityClass, BaseObj};

    #[test]
    fn normalization_is_identity_on_left_nested_spans() {
        let b = Base::span_finset(ArityClass::Finite);
        let f = Hom1::span(2, 3, vec![0, 1, 1], vec![2, 0, 1]).unwrap();
        let g = Hom1::span(3, 2, vec![0, 1, 2, 2], vec![0, 0, 1, 1]).unwrap();
        let h = Hom1::span(2, 2, vec![0, 1], vec![1, 0]).unwrap();
        let left = Expr::chain(&[h.clone(), g.clone(), f.clone()]).unwrap();
        let (nf, to, from) = normalize(&b, &left).unwrap();
        assert_eq!(nf, left.eval(&b).unwrap());
        assert_eq!(to, b.id2(&nf).unwrap());
        assert_eq!(from, b.id2(&nf).unwrap());

        let right = Expr::pair(Expr::leaf(&h), Expr::pair(Expr::leaf(&g), Expr::leaf(&f)));
        let cell = reassociate(&b, &right, &left).unwrap();
        assert_eq!(cell.src, right.eval(&b).unwrap());
        assert_eq!(cell.dst, nf);
        // strict associativity of canonical spans: the iso is an identity
        assert_eq!(right.eval(&b).unwrap(), nf);
    }

    #[test]
    fn reassociate_rejects_mismatched_factors() {
        let b = Base::span_finset(ArityClass::Finite);
        let f = b.id1(&BaseObj::Set(2)).unwrap();
        let e1 = Expr::chain(&[f.clone(), f.clone()]).unwrap();
        let e2 = Expr::chain(&[f.clone(), f.clone(), f]).unwrap();
        assert!(reassociate(&b, &e1, &e2).is_err());
    }

    #[test]
    fn four_factor_shuffle_round_trips() {
        let b = Base::boolean_quantale(ArityClass::Finite);
        let m = |rows: usize, cols: usize, e: Vec<u8>| Hom1::mat(rows, cols, e).unwrap();
        let p = m(2, 2, vec![1, 0, 1, 1]);
        let q = m(2, 3, vec![1, 1, 0, 0, 0, 1]);
        let r = m(3, 1, vec![1, 0, 1]);
        let s = m(1, 2, vec![0, 1]);
        let bal = Expr::pair(
            Expr::pair(Expr::leaf(&p), Expr::leaf(&q)),
            Expr::pair(Expr::leaf(&r), Expr::leaf(&s)),
        );
        let left = Expr::chain(&[p, q, r, s]).unwrap();
        let fwd = reassociate(&b, &bal, &left).unwrap();
        let bwd = reassociate(&b, &left, &bal).unwrap();
        assert_eq!(b.vcomp(&bwd, &fwd).unwrap(), b.id2(&bal.eval(&b).unwrap()).unwrap());
    }
}
