//! Finite unital quantales given by explicit tables.
//!
//! A quantale here is a finite join-semilattice with bottom carrying a
//! monoid structure whose tensor distributes over joins on both sides.
//! Every law is checked exhaustively at construction time; an offending
//! table is a hard error, never a warning.

use crate::error::{CkError, Result};
use serde::{Deserialize, Serialize};

/// A finite quantale on elements `0..size`.
///
/// The order is derived from joins: `x ≤ y` iff `join(x, y) == y`.
///
/// # Law sheet (all checked exhaustively by [`Quantale::new`])
///
/// * join: idempotent, commutative, associative, with a bottom element;
/// * tensor: associative, unital with `unit`;
/// * tensor distributes over binary joins on both sides;
/// * bottom is absorbing on both sides (distribution over the empty join).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quantale {
    pub name: String,
    pub size: usize,
    /// `join[x][y]` — table of binary joins.
    pub join: Vec<Vec<u8>>,
    /// `tensor[x][y]` — table of the monoid operation.
    pub tensor: Vec<Vec<u8>>,
    pub unit: u8,
    /// Derived at construction: the unique join-identity.
    pub bottom: u8,
}

impl Quantale {
    pub fn new(
        name: impl Into<String>,
        join: Vec<Vec<u8>>,
        tensor: Vec<Vec<u8>>,
        unit: u8,
    ) -> Result<Self> {
        let name = name.into();
        let size = join.len();
        if size == 0 || size > u8::MAX as usize {
            return Err(CkError::Quantale(format!(
                "{name}: size {size} out of supported range 1..=255"
            )));
        }
        let check_table = |tbl: &Vec<Vec<u8>>, what: &str| -> Result<()> {
            if tbl.len() != size {
                return Err(CkError::Quantale(format!("{name}: {what} table has wrong height")));
            }
            for row in tbl {
                if row.len() != size {
                    return Err(CkError::Quantale(format!("{name}: {what} table is ragged")));
                }
                for &v in row {
                    if v as usize >= size {
                        return Err(CkError::Quantale(format!(
                            "{name}: {what} table entry {v} out of range"
                        )));
                    }
                }
            }
            Ok(())
        };
        check_table(&join, "join")?;
        check_table(&tensor, "tensor")?;
        if unit as usize >= size {
            return Err(CkError::Quantale(format!("{name}: unit {unit} out of range")));
        }

        let j = |x: u8, y: u8| join[x as usize][y as usize];
        let t = |x: u8, y: u8| tensor[x as usize][y as usize];
        let all = || (0..size as u8).collect::<Vec<_>>();

        for x in all() {
            if j(x, x) != x {
                return Err(CkError::Quantale(format!("{name}: join not idempotent at {x}")));
            }
            for y in all() {
                if j(x, y) != j(y, x) {
                    return Err(CkError::Quantale(format!(
                        "{name}: join not commutative at ({x},{y})"
                    )));
                }
                for z in all() {
                    if j(j(x, y), z) != j(x, j(y, z)) {
                        return Err(CkError::Quantale(format!(
                            "{name}: join not associative at ({x},{y},{z})"
                        )));
                    }
                    if t(t(x, y), z) != t(x, t(y, z)) {
                        return Err(CkError::Quantale(format!(
                            "{name}: tensor not associative at ({x},{y},{z})"
                        )));
                    }
                    // Distributivity over binary joins, both sides.
                    if t(x, j(y, z)) != j(t(x, y), t(x, z)) {
                        return Err(CkError::Quantale(format!(
                            "{name}: tensor does not left-distribute at ({x},{y},{z})"
                        )));
                    }
                    if t(j(y, z), x) != j(t(y, x), t(z, x)) {
                        return Err(CkError::Quantale(format!(
                            "{name}: tensor does not right-distribute at ({x},{y},{z})"
                        )));
                    }
                }
            }
        }
        for x in all() {
            if t(unit, x) != x || t(x, unit) != x {
                return Err(CkError::Quantale(format!("{name}: unit law fails at {x}")));
            }
        }
        // Bottom: the unique element below everything (join of the empty set).
        let mut bottom = None;
        for b in all() {
            if all().iter().all(|&x| j(b, x) == x) {
                bottom = Some(b);
                break;
            }
        }
        let bottom = bottom
            .ok_or_else(|| CkError::Quantale(format!("{name}: no bottom element")))?;
        // Distribution over the empty join: bottom is absorbing.
        for x in all() {
            if t(bottom, x) != bottom || t(x, bottom) != bottom {
                return Err(CkError::Quantale(format!(
                    "{name}: bottom not absorbing at {x} (tensor must distribute over empty joins)"
                )));
            }
        }

        Ok(Quantale { name, size, join, tensor, unit, bottom })
    }

    /// The two-element Boolean quantale `⊥ < ⊤` with `∧` as tensor.
    pub fn boolean() -> Self {
        Quantale::new(
            "boolean",
            vec![vec![0, 1], vec![1, 1]],
            vec![vec![0, 0], vec![0, 1]],
            1,
        )
        .expect("boolean quantale tables are lawful")
    }

    /// The min-plus quantale truncated at `cap`: elements `0..=cap` read as
    /// distances with `cap` playing ∞, join = min, tensor = capped addition,
    /// unit = 0. The derived order is reversed-numeric, so `bottom = cap`.
    pub fn min_plus(cap: u8) -> Self {
        let n = cap as usize + 1;
        let join = (0..n)
            .map(|x| (0..n).map(|y| x.min(y) as u8).collect())
            .collect();
        let tensor = (0..n)
            .map(|x| (0..n).map(|y| (x + y).min(cap as usize) as u8).collect())
            .collect();
        Quantale::new(format!("min-plus(cap={cap})"), join, tensor, 0)
            .expect("min-plus quantale tables are lawful")
    }

    #[inline]
    pub fn j(&self, x: u8, y: u8) -> u8 {
        self.join[x as usize][y as usize]
    }

    #[inline]
    pub fn t(&self, x: u8, y: u8) -> u8 {
        self.tensor[x as usize][y as usize]
    }

    /// Derived order: `x ≤ y` iff `x ∨ y = y`.
    #[inline]
    pub fn le(&self, x: u8, y: u8) -> bool {
        self.j(x, y) == y
    }

    /// Join of an arbitrary finite family (empty join = bottom).
    pub fn join_all(&self, xs: impl IntoIterator<Item = u8>) -> u8 {
        xs.into_iter().fold(self.bottom, |a, b| self.j(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean_laws() {
        let q = Quantale::boolean();
        assert_eq!(q.bottom, 0);
        assert!(q.le(0, 1));
        assert!(!q.le(1, 0));
    }

    #[test]
    fn min_plus_reads_as_distances() {
        let q = Quantale::min_plus(10);
        // 2 ⊗ 3 = 5: composite distance along a chain.
        assert_eq!(q.t(2, 3), 5);
        // values exceeding the cap collapse to ∞ (= cap).
        assert_eq!(q.t(6, 7), 10);
        // the derived order is reversed-numeric: shorter distances are larger.
        assert!(q.le(5, 3));
        assert_eq!(q.bottom, 10);
        assert_eq!(q.join_all([7, 4, 9]), 4);
    }

    #[test]
    fn broken_tables_are_hard_errors() {
        // A "join" that is not idempotent.
        let bad = Quantale::new(
            "bad",
            vec![vec![1, 1], vec![1, 1]],
            vec![vec![0, 0], vec![0, 1]],
            1,
        );
        assert!(matches!(bad, Err(CkError::Quantale(_))));
        // Tensor failing to absorb bottom (distribution over the empty join):
        // take join = max (bottom 0) and tensor = constant 1.
        let bad2 = Quantale::new(
            "bad2",
            vec![vec![0, 1], vec![1, 1]],
            vec![vec![1, 1], vec![1, 1]],
            1,
        );
        assert!(matches!(bad2, Err(CkError::Quantale(_))));
    }
}
