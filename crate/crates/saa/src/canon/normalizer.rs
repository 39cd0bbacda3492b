//! Incremental standard-basis rewriting.
//!
//! A [`Normalizer`] carries a standard basis of the ambient space (columns,
//! in slot order `x1, y1, ..., xn, yn`) and rewrites it by elementary
//! symplectic moves: adding a multiple of one basis vector to another with
//! the forced compensation on the partner slot, rescaling a hyperbolic pair,
//! and swapping pairs. Every move preserves the standard form exactly, so
//! the column matrix stays symplectic throughout; the classification
//! recipes drive these moves until the presentation read through the basis
//! matches a catalog instance.

use crate::algebra::{Algebra, Presentation};
use crate::gf::FieldElement;
use crate::symlin::{form_eval, x_slot, y_slot, BasisChange, Vector};

use super::CanonError;

pub(crate) struct Normalizer<'a> {
    alg: &'a Algebra,
    cols: Vec<Vector>,
    trace: Vec<String>,
}

impl<'a> Normalizer<'a> {
    /// Wraps a candidate basis, verifying that it is standard.
    pub fn new(alg: &'a Algebra, cols: Vec<Vector>) -> Result<Self, CanonError> {
        let n = Normalizer {
            alg,
            cols,
            trace: Vec::new(),
        };
        n.check_standard()?;
        Ok(n)
    }

    pub fn check_standard(&self) -> Result<(), CanonError> {
        let d = self.alg.dim();
        if self.cols.len() != d {
            return Err(CanonError::Internal("basis has the wrong size".into()));
        }
        for s in 0..d {
            for t in (s + 1)..d {
                let got = form_eval(&self.cols[s], &self.cols[t])?;
                let expect_one = s % 2 == 0 && t == s + 1;
                if expect_one != got.is_one() || (!expect_one && !got.is_zero()) {
                    return Err(CanonError::Internal(format!(
                        "basis is not standard at slots {s},{t}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn trace(&self) -> &[String] {
        &self.trace
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.trace.push(msg.into());
    }

    pub fn col(&self, slot: usize) -> &Vector {
        &self.cols[slot]
    }

    /// Product of the vectors in two slots.
    pub fn prod(&self, a: usize, b: usize) -> Vector {
        self.alg.multiply(&self.cols[a], &self.cols[b])
    }

    /// Triple value of three slots.
    pub fn t(&self, a: usize, b: usize, c: usize) -> FieldElement {
        self.alg
            .triple(&self.cols[a], &self.cols[b], &self.cols[c])
    }

    fn add_to(&mut self, dst: usize, src: usize, c: &FieldElement) {
        self.cols[dst] = self.cols[dst].add_scaled(&self.cols[src], c);
    }

    /// `y_i += c y_j` with the compensation `x_j -= c x_i` (pair indices,
    /// 1-based, `i != j`).
    pub fn y_add_y(&mut self, i: usize, j: usize, c: &FieldElement) {
        debug_assert_ne!(i, j);
        if c.is_zero() {
            return;
        }
        self.add_to(y_slot(i), y_slot(j), c);
        self.add_to(x_slot(j), x_slot(i), &c.neg());
        self.trace.push(format!("y{i} += ({c}) y{j}"));
        debug_assert!(self.check_standard().is_ok());
    }

    /// `y_i += c x_j`; for `i != j` the compensation is `y_j += c x_i`.
    pub fn y_add_x(&mut self, i: usize, j: usize, c: &FieldElement) {
        if c.is_zero() {
            return;
        }
        self.add_to(y_slot(i), x_slot(j), c);
        if i != j {
            self.add_to(y_slot(j), x_slot(i), c);
        }
        self.trace.push(format!("y{i} += ({c}) x{j}"));
        debug_assert!(self.check_standard().is_ok());
    }

    /// `x_i += c x_j` with the compensation `y_j -= c y_i` (`i != j`).
    pub fn x_add_x(&mut self, i: usize, j: usize, c: &FieldElement) {
        debug_assert_ne!(i, j);
        if c.is_zero() {
            return;
        }
        self.add_to(x_slot(i), x_slot(j), c);
        self.add_to(y_slot(j), y_slot(i), &c.neg());
        self.trace.push(format!("x{i} += ({c}) x{j}"));
        debug_assert!(self.check_standard().is_ok());
    }

    /// `y_i *= c`, `x_i *= 1/c`.
    pub fn scale_pair(&mut self, i: usize, c: &FieldElement) -> Result<(), CanonError> {
        let inv = c
            .inv()
            .map_err(|_| CanonError::Internal("scaling a pair by zero".into()))?;
        self.cols[y_slot(i)] = self.cols[y_slot(i)].scale(c);
        self.cols[x_slot(i)] = self.cols[x_slot(i)].scale(&inv);
        self.trace.push(format!("pair {i} *= {c}"));
        debug_assert!(self.check_standard().is_ok());
        Ok(())
    }

    /// Exchanges pairs `i` and `j`.
    pub fn swap_pairs(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.cols.swap(x_slot(i), x_slot(j));
        self.cols.swap(y_slot(i), y_slot(j));
        self.trace.push(format!("swap pairs {i}, {j}"));
        debug_assert!(self.check_standard().is_ok());
    }

    pub fn basis_change(&self) -> BasisChange {
        BasisChange::from_cols(self.alg.field(), &self.cols)
    }

    /// The presentation of the algebra with respect to the current basis.
    pub fn presentation(&self) -> Result<Presentation, CanonError> {
        let d = self.alg.dim();
        let mut pres = Presentation::new(self.alg.field(), d / 2);
        for a in 0..d {
            for b in (a + 1)..d {
                let uv = self.prod(a, b);
                for c in (b + 1)..d {
                    let v = form_eval(&uv, &self.cols[c])?;
                    pres.insert(a, b, c, v)?;
                }
            }
        }
        Ok(pres)
    }

    /// Asserts that the current presentation equals `expect` exactly.
    pub fn expect_presentation(&self, expect: &Presentation) -> Result<(), CanonError> {
        let got = self.presentation()?;
        if &got != expect {
            return Err(CanonError::Internal(format!(
                "normalization landed on the wrong presentation:\n{got:?}\nexpected:\n{expect:?}"
            )));
        }
        Ok(())
    }
}
