//! Presentations, product tables and series of symplectic alternating
//! algebras.
//!
//! An algebra on the standard space is determined by the alternating
//! trilinear form `T(u,v,w) = (u·v, w)` and hence by finitely many triple
//! values `(u_i u_j, u_k)` over basis 3-subsets. Products are recovered by
//! expanding against the form: `u·v = sum_k T(u,v,y_k) x_k - T(u,v,x_k) y_k`.
//! Building an algebra always re-verifies `(uv,w) = (vw,u)` on every basis
//! 3-subset.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gf::{Field, FieldElement, FieldSpec, GfError};
use crate::symlin::{form_eval, BasisChange, Subspace, SymlinError, Vector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("triple {0:?} repeats a basis symbol")]
    RepeatedSymbol([usize; 3]),
    #[error("duplicate triple for basis subset {0:?}")]
    DuplicateTriple([usize; 3]),
    #[error("basis index {0} out of range for dimension {1}")]
    IndexOutOfRange(usize, usize),
    #[error("the product axioms fail on a basis triple: {0}")]
    AxiomViolation(String),
    #[error("presentation is not in nilpotent form")]
    NotNilpotentForm,
    #[error("dimension {0} is too small for this operation")]
    DimensionTooSmall(usize),
    #[error("basis change is not symplectic")]
    NotSymplectic,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Lin(#[from] SymlinError),
}

/// Key of a stored triple value: three distinct basis indices in increasing
/// order.
pub type TripleKey = [usize; 3];

fn sort_key(a: usize, b: usize, c: usize) -> Result<(TripleKey, bool), AlgebraError> {
    if a == b || b == c || a == c {
        return Err(AlgebraError::RepeatedSymbol([a, b, c]));
    }
    let mut key = [a, b, c];
    let mut swaps = 0;
    // three-element bubble sort, counting transpositions
    if key[0] > key[1] {
        key.swap(0, 1);
        swaps += 1;
    }
    if key[1] > key[2] {
        key.swap(1, 2);
        swaps += 1;
    }
    if key[0] > key[1] {
        key.swap(0, 1);
        swaps += 1;
    }
    Ok((key, swaps % 2 == 1))
}

/// A sparse presentation: the nonzero values `(u_a u_b, u_c)` over 3-subsets
/// of the standard basis, stored with sorted keys and the permutation sign
/// folded into the value.
#[derive(Clone, PartialEq, Eq)]
pub struct Presentation {
    field: Field,
    n: usize,
    triples: BTreeMap<TripleKey, FieldElement>,
}

impl Presentation {
    pub fn new(field: &Field, n: usize) -> Self {
        assert!(n >= 1);
        Presentation {
            field: field.clone(),
            n,
            triples: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Half-dimension `n`; the algebra lives in dimension `2n`.
    pub fn half_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn triples(&self) -> &BTreeMap<TripleKey, FieldElement> {
        &self.triples
    }

    /// Records `T(a,b,c) = value`. Zero values are dropped; setting the same
    /// 3-subset twice is an error.
    pub fn insert(
        &mut self,
        a: usize,
        b: usize,
        c: usize,
        value: FieldElement,
    ) -> Result<(), AlgebraError> {
        for idx in [a, b, c] {
            if idx >= self.dim() {
                return Err(AlgebraError::IndexOutOfRange(idx, self.dim()));
            }
        }
        let (key, odd) = sort_key(a, b, c)?;
        if self.triples.contains_key(&key) {
            return Err(AlgebraError::DuplicateTriple(key));
        }
        if value.is_zero() {
            return Ok(());
        }
        let stored = if odd { value.neg() } else { value };
        self.triples.insert(key, stored);
        Ok(())
    }

    /// The alternating extension of the stored values.
    pub fn value(&self, a: usize, b: usize, c: usize) -> FieldElement {
        match sort_key(a, b, c) {
            Err(_) => FieldElement::zero(&self.field),
            Ok((key, odd)) => match self.triples.get(&key) {
                None => FieldElement::zero(&self.field),
                Some(v) => {
                    if odd {
                        v.neg()
                    } else {
                        v.clone()
                    }
                }
            },
        }
    }

    /// A nilpotent presentation only uses `(x_i y_j, y_k)` and
    /// `(y_i y_j, y_k)` with `i < j < k` (pair indices).
    pub fn is_nilpotent_form(&self) -> bool {
        self.triples.keys().all(|key| {
            let pairs: Vec<usize> = key.iter().map(|&s| s / 2).collect();
            let ys: Vec<bool> = key.iter().map(|&s| s % 2 == 1).collect();
            pairs[0] < pairs[1]
                && pairs[1] < pairs[2]
                && ys[1]
                && ys[2]
        })
    }

    /// Deterministic random nilpotent presentation: each admissible triple
    /// receives a uniform nonzero value with probability `density`.
    pub fn random_nilpotent(
        field: &Field,
        n: usize,
        seed: u64,
        density: f64,
    ) -> Result<Presentation, AlgebraError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pres = Presentation::new(field, n);
        let nonzero: Vec<FieldElement> = match field.order() {
            Some(_) => crate::gf::nonzero_elements(field)?,
            None => (1..=5).map(|k| FieldElement::from_int(field, k)).collect(),
        };
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    for first_is_x in [true, false] {
                        if rng.gen::<f64>() >= density {
                            continue;
                        }
                        let a = if first_is_x { 2 * i } else { 2 * i + 1 };
                        let value = nonzero[rng.gen_range(0..nonzero.len())].clone();
                        pres.insert(a, 2 * j + 1, 2 * k + 1, value)?;
                    }
                }
            }
        }
        Ok(pres)
    }

    /// Renders the shared text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "field: {}", self.field.literal());
        let _ = writeln!(out, "dim: {}", self.dim());
        for (key, value) in &self.triples {
            let name = |s: usize| {
                let pair = s / 2 + 1;
                if s.is_multiple_of(2) {
                    format!("x{pair}")
                } else {
                    format!("y{pair}")
                }
            };
            let _ = writeln!(
                out,
                "triple {} {} {} = {}",
                name(key[0]),
                name(key[1]),
                name(key[2]),
                value
            );
        }
        out
    }

    /// Parses the text format produced by [`Presentation::to_text`].
    pub fn parse(text: &str) -> Result<Presentation, AlgebraError> {
        let mut field: Option<Field> = None;
        let mut dim: Option<usize> = None;
        let mut pres: Option<Presentation> = None;
        // a file may not mention a 3-subset twice, not even with value zero
        let mut seen: std::collections::BTreeSet<TripleKey> = std::collections::BTreeSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            let err = |msg: &str| AlgebraError::Parse {
                line: lineno + 1,
                msg: msg.into(),
            };
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("field:") {
                if field.is_some() {
                    return Err(err("field given twice"));
                }
                field = Some(FieldSpec::parse(rest.trim()).map_err(|e| AlgebraError::Parse {
                    line: lineno + 1,
                    msg: e.to_string(),
                })?);
                continue;
            }
            if let Some(rest) = line.strip_prefix("dim:") {
                if dim.is_some() {
                    return Err(err("dim given twice"));
                }
                let d: usize = rest.trim().parse().map_err(|_| err("bad dimension"))?;
                if d == 0 || !d.is_multiple_of(2) {
                    return Err(err("dimension must be even and positive"));
                }
                dim = Some(d);
                continue;
            }
            if let Some(rest) = line.strip_prefix("triple") {
                let field = field.clone().ok_or_else(|| err("field must come first"))?;
                let dim = dim.ok_or_else(|| err("dim must come before triples"))?;
                let p = pres.get_or_insert_with(|| Presentation::new(&field, dim / 2));
                let (lhs, rhs) = rest.split_once('=').ok_or_else(|| err("missing `=`"))?;
                let symbols: Vec<&str> = lhs.split_whitespace().collect();
                if symbols.len() != 3 {
                    return Err(err("expected three basis symbols"));
                }
                let mut idx = [0usize; 3];
                for (k, sym) in symbols.iter().enumerate() {
                    idx[k] = parse_symbol(sym, dim).ok_or_else(|| err("bad basis symbol"))?;
                }
                let value =
                    FieldElement::parse(&field, rhs.trim()).map_err(|e| AlgebraError::Parse {
                        line: lineno + 1,
                        msg: e.to_string(),
                    })?;
                let (key, _) =
                    sort_key(idx[0], idx[1], idx[2]).map_err(|e| AlgebraError::Parse {
                        line: lineno + 1,
                        msg: e.to_string(),
                    })?;
                if !seen.insert(key) {
                    return Err(AlgebraError::Parse {
                        line: lineno + 1,
                        msg: AlgebraError::DuplicateTriple(key).to_string(),
                    });
                }
                p.insert(idx[0], idx[1], idx[2], value)
                    .map_err(|e| AlgebraError::Parse {
                        line: lineno + 1,
                        msg: e.to_string(),
                    })?;
                continue;
            }
            return Err(err("unrecognised line"));
        }
        match (field, dim, pres) {
            (Some(f), Some(d), None) => Ok(Presentation::new(&f, d / 2)),
            (_, _, Some(p)) => Ok(p),
            _ => Err(AlgebraError::Parse {
                line: 0,
                msg: "missing field or dim header".into(),
            }),
        }
    }
}

fn parse_symbol(sym: &str, dim: usize) -> Option<usize> {
    let (kind, num) = sym.split_at(1);
    let pair: usize = num.parse().ok()?;
    if pair == 0 || pair > dim / 2 {
        return None;
    }
    match kind {
        "x" => Some(2 * (pair - 1)),
        "y" => Some(2 * (pair - 1) + 1),
        _ => None,
    }
}

impl std::fmt::Debug for Presentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// A fully expanded algebra: the presentation plus the product table
/// `u_a · u_b` over all basis pairs.
#[derive(Clone)]
pub struct Algebra {
    pres: Presentation,
    products: Vec<Vector>, // index a * 2n + b for a < b
    nonzero_pairs: Vec<(usize, usize)>,
}

impl Algebra {
    /// Expands the products and verifies `(uv,w) = (vw,u)` together with
    /// alternation on every basis 3-subset.
    pub fn build(pres: Presentation) -> Result<Algebra, AlgebraError> {
        let d = pres.dim();
        let field = pres.field().clone();
        let mut products = vec![Vector::zero(&field, d); d * d];
        for a in 0..d {
            for b in (a + 1)..d {
                let mut v = Vector::zero(&field, d);
                for k in 0..d / 2 {
                    // coefficient of x_k is T(a,b,y_k); of y_k is -T(a,b,x_k)
                    v.set_coord(2 * k, pres.value(a, b, 2 * k + 1));
                    v.set_coord(2 * k + 1, pres.value(a, b, 2 * k).neg());
                }
                products[a * d + b] = v;
            }
        }
        let nonzero_pairs = (0..d)
            .flat_map(|a| ((a + 1)..d).map(move |b| (a, b)))
            .filter(|&(a, b)| !products[a * d + b].is_zero())
            .collect();
        let alg = Algebra {
            pres,
            products,
            nonzero_pairs,
        };
        alg.check_axioms()?;
        Ok(alg)
    }

    fn check_axioms(&self) -> Result<(), AlgebraError> {
        let d = self.dim();
        for a in 0..d {
            for b in (a + 1)..d {
                for c in (b + 1)..d {
                    let ab_c = form_eval(&self.basis_product(a, b), &self.basis_vector(c))?;
                    let bc_a = form_eval(&self.basis_product(b, c), &self.basis_vector(a))?;
                    let expected = self.pres.value(a, b, c);
                    if ab_c != expected || bc_a != expected {
                        return Err(AlgebraError::AxiomViolation(format!(
                            "basis subset {a},{b},{c}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn field(&self) -> &Field {
        self.pres.field()
    }

    pub fn dim(&self) -> usize {
        self.pres.dim()
    }

    pub fn half_dim(&self) -> usize {
        self.pres.half_dim()
    }

    pub fn basis_vector(&self, k: usize) -> Vector {
        Vector::basis(self.field(), self.dim(), k)
    }

    /// Product of two basis vectors.
    pub fn basis_product(&self, a: usize, b: usize) -> Vector {
        let d = self.dim();
        if a == b {
            Vector::zero(self.field(), d)
        } else if a < b {
            self.products[a * d + b].clone()
        } else {
            self.products[b * d + a].neg()
        }
    }

    /// Bilinear extension of the product table.
    pub fn multiply(&self, u: &Vector, v: &Vector) -> Vector {
        assert_eq!(u.dim(), self.dim());
        assert_eq!(v.dim(), self.dim());
        let d = self.dim();
        let mut out = Vector::zero(self.field(), d);
        // only pairs with a nonzero product can contribute
        for &(a, b) in &self.nonzero_pairs {
            // u_a v_b - u_b v_a against the (a,b) product
            let coeff = u.coord(a).mul(v.coord(b)).sub(&u.coord(b).mul(v.coord(a)));
            if coeff.is_zero() {
                continue;
            }
            out = out.add_scaled(&self.products[a * d + b], &coeff);
        }
        out
    }

    /// `(u·v, w)`.
    pub fn triple(&self, u: &Vector, v: &Vector, w: &Vector) -> FieldElement {
        form_eval(&self.multiply(u, v), w).expect("same space")
    }

    /// Span of all products of basis vectors of the two subspaces.
    pub fn subspace_product(&self, u: &Subspace, w: &Subspace) -> Subspace {
        let mut products = Vec::new();
        for a in u.basis() {
            for b in w.basis() {
                let p = self.multiply(a, b);
                if !p.is_zero() {
                    products.push(p);
                }
            }
        }
        Subspace::span(self.field(), self.dim(), &products)
    }

    /// `{v in within : v·s ∈ target for all s in of}`.
    pub fn multiplier_space(
        &self,
        within: &Subspace,
        of: &Subspace,
        target: &Subspace,
    ) -> Subspace {
        let field = self.field();
        let d = self.dim();
        if within.is_zero() {
            return Subspace::zero(field, d);
        }
        // linear conditions on coefficients over the basis of `within`
        let membership = membership_conditions(target);
        let mut rows: Vec<Vec<FieldElement>> = Vec::new();
        for s in of.basis() {
            // v = sum t_a b_a; v·s = sum t_a (b_a · s)
            let images: Vec<Vector> = within.basis().iter().map(|b| self.multiply(b, s)).collect();
            for cond in &membership {
                let row: Vec<FieldElement> = images
                    .iter()
                    .map(|img| {
                        let mut acc = FieldElement::zero(field);
                        for (c, x) in cond.iter().zip(img.coords()) {
                            acc = acc.add(&c.mul(x));
                        }
                        acc
                    })
                    .collect();
                rows.push(row);
            }
        }
        if rows.is_empty() {
            return within.clone();
        }
        let mut m = crate::symlin::Mat::zeros(field, rows.len(), within.dim());
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        let kernel = m.kernel();
        let vectors: Vec<Vector> = kernel
            .iter()
            .map(|t| {
                let mut v = Vector::zero(field, d);
                for (a, b) in within.basis().iter().enumerate() {
                    v = v.add_scaled(b, t.coord(a));
                }
                v
            })
            .collect();
        Subspace::span(field, d, &vectors)
    }

    /// Centralizer of `s` inside `within`.
    pub fn centralizer(&self, s: &Subspace, within: &Subspace) -> Subspace {
        self.multiplier_space(within, s, &Subspace::zero(self.field(), self.dim()))
    }

    /// The centre `Z(L)`.
    pub fn center(&self) -> Subspace {
        let full = Subspace::full(self.field(), self.dim());
        self.centralizer(&full, &full)
    }

    /// Lower central series `L, L², ...` with `L^{k+1} = L^k · L`, listed
    /// until it stabilises.
    pub fn lower_central(&self) -> Chain {
        let full = Subspace::full(self.field(), self.dim());
        let mut terms = vec![full.clone()];
        loop {
            let prev = terms.last().unwrap();
            let next = self.subspace_product(prev, &full);
            if &next == prev {
                break;
            }
            terms.push(next);
            if terms.last().unwrap().is_zero() {
                break;
            }
        }
        Chain {
            kind: ChainKind::LowerCentral,
            terms,
        }
    }

    /// Upper central series `0 = Z_0 ≤ Z_1 ≤ ...` with
    /// `Z_{k+1} = {v : v·L ⊆ Z_k}`, listed until it stabilises.
    pub fn upper_central(&self) -> Chain {
        let full = Subspace::full(self.field(), self.dim());
        let mut terms = vec![Subspace::zero(self.field(), self.dim())];
        loop {
            let prev = terms.last().unwrap();
            let next = self.multiplier_space(&full, &full, prev);
            if &next == prev {
                break;
            }
            terms.push(next);
        }
        Chain {
            kind: ChainKind::UpperCentral,
            terms,
        }
    }

    pub fn central_series(&self) -> (Chain, Chain) {
        (self.lower_central(), self.upper_central())
    }

    /// Nilpotency: the lower central series reaches zero; the class counts
    /// its nonzero terms.
    pub fn nilpotency(&self) -> Nilpotency {
        let lower = self.lower_central();
        if lower.terms().last().unwrap().is_zero() {
            Nilpotency::Nilpotent {
                class: lower.terms().len() - 1,
            }
        } else {
            Nilpotency::NotNilpotent
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        matches!(self.nilpotency(), Nilpotency::Nilpotent { .. })
    }

    /// Re-expresses the algebra in the basis given by the columns of `m`,
    /// which must be symplectic. The abstract algebra is unchanged.
    pub fn change_basis(&self, m: &BasisChange) -> Result<Algebra, AlgebraError> {
        if m.dim() != self.dim() || !m.is_symplectic() {
            return Err(AlgebraError::NotSymplectic);
        }
        let d = self.dim();
        let mut pres = Presentation::new(self.field(), self.half_dim());
        for a in 0..d {
            for b in (a + 1)..d {
                let uv = self.multiply(&m.col(a), &m.col(b));
                for c in (b + 1)..d {
                    let t = form_eval(&uv, &m.col(c))?;
                    pres.insert(a, b, c, t)?;
                }
            }
        }
        Algebra::build(pres)
    }
}

/// Linear conditions cutting out `target`: reduction against the echelon
/// basis is linear in `v`, so `v ∈ target` iff every coordinate of the
/// residue vanishes.
fn membership_conditions(target: &Subspace) -> Vec<Vec<FieldElement>> {
    let field = target.field();
    let d = target.ambient();
    let residues: Vec<Vector> = (0..d)
        .map(|j| target.reduce(&Vector::basis(field, d, j)))
        .collect();
    let mut conds: Vec<Vec<FieldElement>> = Vec::new();
    for c in 0..d {
        let row: Vec<FieldElement> = residues.iter().map(|r| r.coord(c).clone()).collect();
        if row.iter().any(|v| !v.is_zero()) {
            conds.push(row);
        }
    }
    conds
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainKind {
    LowerCentral,
    UpperCentral,
    Custom,
}

/// An ascending or descending chain of subspaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    kind: ChainKind,
    terms: Vec<Subspace>,
}

impl Chain {
    pub fn kind(&self) -> ChainKind {
        self.kind
    }

    pub fn terms(&self) -> &[Subspace] {
        &self.terms
    }

    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(|t| t.dim()).collect()
    }

    /// Term by index with the convention `term(1) = L` for lower chains and
    /// `term(0) = 0` for upper chains; out-of-range indices saturate.
    pub fn term(&self, k: usize) -> &Subspace {
        match self.kind {
            ChainKind::LowerCentral => {
                let idx = k.saturating_sub(1).min(self.terms.len() - 1);
                &self.terms[idx]
            }
            _ => &self.terms[k.min(self.terms.len() - 1)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nilpotency {
    Nilpotent { class: usize },
    NotNilpotent,
}

/// Maximal-class test for nilpotent presentations of dimension at least 8:
/// `x_i y_{i+1} ≠ 0` for `i = 2..n-2` and `x_1 y_2`, `y_1 y_2` independent.
pub fn is_maximal_class(alg: &Algebra) -> Result<bool, AlgebraError> {
    if !alg.presentation().is_nilpotent_form() {
        return Err(AlgebraError::NotNilpotentForm);
    }
    let n = alg.half_dim();
    if alg.dim() < 8 {
        return Err(AlgebraError::DimensionTooSmall(alg.dim()));
    }
    for i in 2..=n.saturating_sub(2) {
        let prod = alg.basis_product(2 * (i - 1), 2 * i + 1); // x_i · y_{i+1}
        if prod.is_zero() {
            return Ok(false);
        }
    }
    let a = alg.basis_product(0, 3); // x1 · y2
    let b = alg.basis_product(1, 3); // y1 · y2
    let span = Subspace::span(alg.field(), alg.dim(), &[a, b]);
    Ok(span.dim() == 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;
    use crate::symlin::{random_symplectic, x_slot, y_slot};

    fn f3() -> Field {
        FieldSpec::prime(3).unwrap()
    }

    fn pres_from(field: &Field, n: usize, triples: &[(usize, usize, usize, i64)]) -> Presentation {
        let mut p = Presentation::new(field, n);
        for &(a, b, c, v) in triples {
            p.insert(a, b, c, FieldElement::from_int(field, v)).unwrap();
        }
        p
    }

    /// (y1 y2, y3) = 1, (y1 y4, y5) = 1 in dimension 10.
    fn p51(field: &Field) -> Presentation {
        pres_from(
            field,
            5,
            &[
                (y_slot(1), y_slot(2), y_slot(3), 1),
                (y_slot(1), y_slot(4), y_slot(5), 1),
            ],
        )
    }

    #[test]
    fn triple_normalization_applies_permutation_sign() {
        let f = f3();
        let mut p = Presentation::new(&f, 5);
        p.insert(y_slot(2), y_slot(1), y_slot(3), FieldElement::one(&f)).unwrap();
        assert_eq!(
            p.value(y_slot(1), y_slot(2), y_slot(3)),
            FieldElement::from_int(&f, -1)
        );
        assert_eq!(
            p.value(y_slot(3), y_slot(1), y_slot(2)),
            FieldElement::from_int(&f, -1)
        );
    }

    #[test]
    fn duplicate_and_repeated_symbols_rejected() {
        let f = f3();
        let mut p = Presentation::new(&f, 5);
        p.insert(0, 3, 5, FieldElement::one(&f)).unwrap();
        assert!(matches!(
            p.insert(3, 0, 5, FieldElement::one(&f)),
            Err(AlgebraError::DuplicateTriple(_))
        ));
        assert!(matches!(
            p.insert(1, 1, 2, FieldElement::one(&f)),
            Err(AlgebraError::RepeatedSymbol(_))
        ));
    }

    #[test]
    fn dual_expansion_examples() {
        let f = f3();
        let alg = Algebra::build(p51(&f)).unwrap();
        // y1·y2 = x3
        assert_eq!(
            alg.basis_product(y_slot(1), y_slot(2)),
            alg.basis_vector(x_slot(3))
        );
        // (y1 y2, y3) = 1
        assert!(alg
            .triple(
                &alg.basis_vector(y_slot(1)),
                &alg.basis_vector(y_slot(2)),
                &alg.basis_vector(y_slot(3))
            )
            .is_one());
    }

    #[test]
    fn empty_presentation_is_abelian() {
        let f = f3();
        let alg = Algebra::build(Presentation::new(&f, 5)).unwrap();
        assert_eq!(alg.lower_central().dims(), vec![10, 0]);
        assert_eq!(alg.upper_central().dims(), vec![0, 10]);
        assert_eq!(alg.nilpotency(), Nilpotency::Nilpotent { class: 1 });
    }

    #[test]
    fn multiply_is_alternating() {
        let f = f3();
        let alg = Algebra::build(p51(&f)).unwrap();
        for seed in 0..5u64 {
            let m = random_symplectic(&f, 5, seed, 15).unwrap();
            let u = m.col(1);
            assert!(alg.multiply(&u, &u).is_zero());
        }
    }

    #[test]
    fn p51_series_dims() {
        let f = f3();
        let alg = Algebra::build(p51(&f)).unwrap();
        assert_eq!(alg.lower_central().dims(), vec![10, 5, 0]);
        assert_eq!(alg.upper_central().dims(), vec![0, 5, 10]);
        assert_eq!(alg.nilpotency(), Nilpotency::Nilpotent { class: 2 });
    }

    #[test]
    fn non_nilpotent_presentation_detected() {
        // dimension 6 with (x1 x2, y1) = -1 forces x1 into every term
        let f = f3();
        let p = pres_from(&f, 3, &[(x_slot(1), x_slot(2), y_slot(1), -1)]);
        let alg = Algebra::build(p).unwrap();
        assert_eq!(alg.nilpotency(), Nilpotency::NotNilpotent);
    }

    #[test]
    fn center_of_p51() {
        let f = f3();
        let alg = Algebra::build(p51(&f)).unwrap();
        let z = alg.center();
        assert_eq!(z.dim(), 5);
        for i in 1..=5 {
            assert!(z.contains(&alg.basis_vector(x_slot(i))));
        }
        assert!(z.is_isotropic());
    }

    #[test]
    fn maximal_class_criterion() {
        let f = f3();
        let p = pres_from(
            &f,
            5,
            &[
                (x_slot(1), y_slot(2), y_slot(3), 1),
                (y_slot(1), y_slot(2), y_slot(4), 1),
                (x_slot(2), y_slot(3), y_slot(4), 1),
                (x_slot(3), y_slot(4), y_slot(5), 1),
            ],
        );
        let alg = Algebra::build(p).unwrap();
        assert!(is_maximal_class(&alg).unwrap());
        // maximal class in dimension 2n: the series runs through 2n-2
        // distinct terms, here dims 10, 8, 7, 6, 4, 3, 2, 0
        let lower = alg.lower_central();
        assert_eq!(lower.dims(), vec![10, 8, 7, 6, 4, 3, 2, 0]);
        assert_eq!(lower.terms().len(), 8);

        let abelian = Algebra::build(Presentation::new(&f, 5)).unwrap();
        assert!(!is_maximal_class(&abelian).unwrap());
    }

    #[test]
    fn change_basis_identity_and_invariance() {
        let f = f3();
        let alg = Algebra::build(p51(&f)).unwrap();
        let id = BasisChange::identity(&f, 10);
        let same = alg.change_basis(&id).unwrap();
        assert_eq!(same.presentation(), alg.presentation());

        let m = random_symplectic(&f, 5, 11, 30).unwrap();
        let moved = alg.change_basis(&m).unwrap();
        assert_eq!(moved.lower_central().dims(), alg.lower_central().dims());
        let z = moved.center();
        assert_eq!(z.dim(), 5);
        assert!(z.is_isotropic());
    }

    #[test]
    fn random_nilpotent_presentations_are_nilpotent() {
        let f = f3();
        for seed in 0..20u64 {
            let p = Presentation::random_nilpotent(&f, 5, seed, 0.4).unwrap();
            assert!(p.is_nilpotent_form());
            let alg = Algebra::build(p).unwrap();
            assert!(alg.is_nilpotent());
        }
        let empty = Presentation::random_nilpotent(&f, 5, 1, 0.0).unwrap();
        assert!(empty.triples().is_empty());
        let a = Presentation::random_nilpotent(&f, 5, 9, 0.5).unwrap();
        let b = Presentation::random_nilpotent(&f, 5, 9, 0.5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn duality_between_series_on_random_algebras() {
        let f = f3();
        for seed in 0..10u64 {
            let p = Presentation::random_nilpotent(&f, 5, seed, 0.35).unwrap();
            let alg = Algebra::build(p).unwrap();
            let lower = alg.lower_central();
            let upper = alg.upper_central();
            let class = lower.terms().len() - 1;
            for k in 1..=class {
                assert_eq!(
                    upper.term(k),
                    &lower.term(k + 1).perp(),
                    "Z_{k} = (L^{}) perp, seed {seed}",
                    k + 1
                );
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let f = f3();
        let p = p51(&f);
        let text = p.to_text();
        let back = Presentation::parse(&text).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn explicit_zero_values_are_dropped() {
        let text = "field: gf(3)\ndim: 10\ntriple y1 y2 y3 = 0\ntriple y1 y4 y5 = 1\n";
        let p = Presentation::parse(text).unwrap();
        assert_eq!(p.triples().len(), 1);
        // the zero line still occupies its 3-subset for duplicate checking
        let dup = "field: gf(3)\ndim: 10\ntriple y1 y2 y3 = 0\ntriple y2 y1 y3 = 1\n";
        assert!(matches!(
            Presentation::parse(dup),
            Err(AlgebraError::Parse { line: 4, .. })
        ));
    }

    #[test]
    fn parse_errors_report_lines() {
        let bad = "field: gf(3)\ndim: 10\ntriple x1 x1 y2 = 1\n";
        match Presentation::parse(bad) {
            Err(AlgebraError::Parse { line: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let dup = "field: gf(3)\ndim: 10\ntriple y1 y2 y3 = 1\ntriple y2 y1 y3 = 2\n";
        match Presentation::parse(dup) {
            Err(AlgebraError::Parse { line: 4, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}

#[cfg(test)]
mod rational_tests {
    use super::*;
    use crate::gf::FieldSpec;
    use crate::symlin::{random_symplectic, y_slot};

    #[test]
    fn construction_and_series_work_over_the_rationals() {
        let q = FieldSpec::rational();
        let mut p = Presentation::new(&q, 5);
        p.insert(y_slot(1), y_slot(2), y_slot(3), FieldElement::from_rational(&q, 1, 2).unwrap())
            .unwrap();
        p.insert(y_slot(1), y_slot(4), y_slot(5), FieldElement::from_int(&q, 3)).unwrap();
        let alg = Algebra::build(p).unwrap();
        assert_eq!(alg.lower_central().dims(), vec![10, 5, 0]);
        assert_eq!(alg.upper_central().dims(), vec![0, 5, 10]);
        let z = alg.center();
        assert_eq!(z.dim(), 5);
        assert!(z.is_isotropic());

        // basis-change invariance holds over the rationals as well
        let m = random_symplectic(&q, 5, 3, 12).unwrap();
        let moved = alg.change_basis(&m).unwrap();
        assert_eq!(moved.lower_central().dims(), vec![10, 5, 0]);
    }

    #[test]
    fn classification_rejects_infinite_fields() {
        let q = FieldSpec::rational();
        let mut p = Presentation::new(&q, 5);
        p.insert(y_slot(1), y_slot(2), y_slot(3), FieldElement::from_int(&q, 1)).unwrap();
        p.insert(y_slot(1), y_slot(4), y_slot(5), FieldElement::from_int(&q, 1)).unwrap();
        let alg = Algebra::build(p).unwrap();
        assert!(matches!(
            crate::canon::classify(&alg),
            Err(crate::canon::CanonError::InfiniteField)
        ));
        assert!(crate::canon::structure_report(&alg).is_ok());
    }
}
