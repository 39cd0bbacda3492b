//! Exact linear algebra over a symplectic vector space.
//!
//! The ambient space has even dimension `2n` with ordered basis
//! `x1, y1, x2, y2, ..., xn, yn` (coordinate `2k` is `x_{k+1}`, coordinate
//! `2k+1` is `y_{k+1}`). The standard alternating form pairs `(x_i, y_i) = 1`
//! and annihilates everything else. Subspaces are kept in reduced row
//! echelon form, which makes equality, membership and all the lattice
//! operations canonical.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gf::{Field, FieldElement, GfError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymlinError {
    #[error("vectors have different lengths")]
    LengthMismatch,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("ambient dimension must be even")]
    OddDimension,
    #[error("matrix is singular")]
    Singular,
    #[error("partial standard basis violates the form constraints")]
    InconsistentPairing,
    #[error("given vectors are linearly dependent")]
    Dependent,
    #[error("no standard-basis completion found")]
    NoCompletion,
    #[error("basis change is not symplectic")]
    NotSymplectic,
    #[error("the form is degenerate on the subspace")]
    DegenerateRestriction,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// A coordinate vector over the ordered basis `x1, y1, ..., xn, yn`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vector {
    coords: Vec<FieldElement>,
}

impl Vector {
    pub fn new(coords: Vec<FieldElement>) -> Self {
        assert!(!coords.is_empty());
        Vector { coords }
    }

    pub fn zero(field: &Field, dim: usize) -> Self {
        Vector {
            coords: vec![FieldElement::zero(field); dim],
        }
    }

    /// Standard basis vector `e_k`.
    pub fn basis(field: &Field, dim: usize, k: usize) -> Self {
        let mut v = Self::zero(field, dim);
        v.coords[k] = FieldElement::one(field);
        v
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn field(&self) -> &Field {
        self.coords[0].field()
    }

    pub fn coord(&self, k: usize) -> &FieldElement {
        &self.coords[k]
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn set_coord(&mut self, k: usize, v: FieldElement) {
        self.coords[k] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Vector {
            coords: self.coords.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        Vector {
            coords: self.coords.iter().map(|x| x.mul(c)).collect(),
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &Self, c: &FieldElement) -> Self {
        self.add(&other.scale(c))
    }
}

impl std::fmt::Debug for Vector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Slot index of `x_i` (1-based pair index).
pub fn x_slot(i: usize) -> usize {
    2 * (i - 1)
}

/// Slot index of `y_i` (1-based pair index).
pub fn y_slot(i: usize) -> usize {
    2 * (i - 1) + 1
}

/// The standard alternating form.
pub fn form_eval(u: &Vector, v: &Vector) -> Result<FieldElement, SymlinError> {
    if u.dim() != v.dim() {
        return Err(SymlinError::LengthMismatch);
    }
    if !u.dim().is_multiple_of(2) {
        return Err(SymlinError::OddDimension);
    }
    if u.field() != v.field() {
        return Err(SymlinError::FieldMismatch);
    }
    let mut acc = FieldElement::zero(u.field());
    for k in 0..u.dim() / 2 {
        let a = u.coord(2 * k).mul(v.coord(2 * k + 1));
        let b = u.coord(2 * k + 1).mul(v.coord(2 * k));
        acc = acc.add(&a.sub(&b));
    }
    Ok(acc)
}

/// Value of the standard form on basis vectors `e_s, e_t`.
fn standard_form_value(field: &Field, s: usize, t: usize) -> FieldElement {
    if s.is_multiple_of(2) && t == s + 1 {
        FieldElement::one(field)
    } else if t.is_multiple_of(2) && s == t + 1 {
        FieldElement::one(field).neg()
    } else {
        FieldElement::zero(field)
    }
}

// ---------------------------------------------------------------------------
// Dense exact matrices, row-major.

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Mat {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Mat {
            field: field.clone(),
            rows,
            cols,
            data: vec![FieldElement::zero(field); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::one(field));
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[Vector]) -> Self {
        assert!(!rows.is_empty());
        let cols = rows[0].dim();
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for j in 0..cols {
                m.set(i, j, r.coord(j).clone());
            }
        }
        m
    }

    /// Columns are the images of the standard basis.
    pub fn from_cols(field: &Field, cols: &[Vector]) -> Self {
        assert!(!cols.is_empty());
        let rows = cols[0].dim();
        let mut m = Self::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                m.set(i, j, c.coord(i).clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vector {
        Vector::new((0..self.cols).map(|j| self.get(i, j).clone()).collect())
    }

    pub fn col(&self, j: usize) -> Vector {
        Vector::new((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).add(&a.mul(other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &Vector) -> Vector {
        assert_eq!(self.cols, v.dim());
        let mut out = Vector::zero(&self.field, self.rows);
        for i in 0..self.rows {
            let mut acc = FieldElement::zero(&self.field);
            for j in 0..self.cols {
                acc = acc.add(&self.get(i, j).mul(v.coord(j)));
            }
            out.set_coord(i, acc);
        }
        out
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..self.cols {
                let tmp = self.get(r, j).clone();
                self.set(r, j, self.get(pr, j).clone());
                self.set(pr, j, tmp);
            }
            let inv = self.get(r, c).inv().expect("pivot nonzero");
            for j in 0..self.cols {
                let v = self.get(r, j).mul(&inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in 0..self.cols {
                    let v = self.get(i, j).sub(&f.mul(self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel `{v : M v = 0}` as echelonized rows.
    pub fn kernel(&self) -> Vec<Vector> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut basis = Vec::new();
        let one = FieldElement::one(&self.field);
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = Vector::zero(&self.field, self.cols);
            v.set_coord(free, one.clone());
            for (r, &pc) in pivots.iter().enumerate() {
                v.set_coord(pc, m.get(r, free).neg());
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `M v = rhs`, free coordinates set to zero.
    pub fn solve(&self, rhs: &Vector) -> Option<Vector> {
        assert_eq!(self.rows, rhs.dim());
        let mut aug = Mat::zeros(&self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, rhs.coord(i).clone());
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut v = Vector::zero(&self.field, self.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            v.set_coord(pc, aug.get(r, self.cols).clone());
        }
        Some(v)
    }

    pub fn inverse(&self) -> Result<Mat, SymlinError> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, FieldElement::one(&self.field));
        }
        let pivots = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return Err(SymlinError::Singular);
        }
        let mut out = Mat::zeros(&self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Ok(out)
    }
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{:?}", self.row(i))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Subspaces.

/// A subspace given by its reduced row echelon basis, the unique canonical
/// representative, so `==` is subspace equality.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    pub fn zero(field: &Field, ambient: usize) -> Self {
        Subspace {
            field: field.clone(),
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(field: &Field, ambient: usize) -> Self {
        Self::span(field, ambient, &(0..ambient).map(|k| Vector::basis(field, ambient, k)).collect::<Vec<_>>())
    }

    pub fn span(field: &Field, ambient: usize, vectors: &[Vector]) -> Self {
        let nonzero: Vec<&Vector> = vectors.iter().filter(|v| !v.is_zero()).collect();
        if nonzero.is_empty() {
            return Self::zero(field, ambient);
        }
        let rows: Vec<Vector> = nonzero.into_iter().cloned().collect();
        let mut m = Mat::from_rows(field, &rows);
        let pivots = m.rref();
        let basis = (0..pivots.len()).map(|i| m.row(i)).collect();
        Subspace {
            field: field.clone(),
            ambient,
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Residue of `v` after reduction against the echelon basis.
    pub fn reduce(&self, v: &Vector) -> Vector {
        let mut r = v.clone();
        for b in &self.basis {
            let pivot = b.coords().iter().position(|c| c.is_one()).expect("echelon row");
            let coeff = r.coord(pivot).clone();
            if !coeff.is_zero() {
                r = r.sub(&b.scale(&coeff));
            }
        }
        r
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::span(&self.field, self.ambient, &rows)
    }

    /// Intersection via the Zassenhaus double-block reduction.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(&self.field, self.ambient);
        }
        let d = self.ambient;
        let zero = FieldElement::zero(&self.field);
        let mut rows: Vec<Vector> = Vec::new();
        for v in &self.basis {
            let mut c = v.coords().to_vec();
            c.extend(v.coords().iter().cloned());
            rows.push(Vector::new(c));
        }
        for v in &other.basis {
            let mut c = v.coords().to_vec();
            c.extend(std::iter::repeat_n(zero.clone(), d));
            rows.push(Vector::new(c));
        }
        let mut m = Mat::from_rows(&self.field, &rows);
        m.rref();
        let mut inter = Vec::new();
        for i in 0..m.rows() {
            let left_zero = (0..d).all(|j| m.get(i, j).is_zero());
            let right: Vec<FieldElement> = (d..2 * d).map(|j| m.get(i, j).clone()).collect();
            let rv = Vector::new(right);
            if left_zero && !rv.is_zero() {
                inter.push(rv);
            }
        }
        Subspace::span(&self.field, d, &inter)
    }

    /// Orthogonal complement with respect to the standard alternating form.
    pub fn perp(&self) -> Subspace {
        if self.is_zero() {
            return Subspace::full(&self.field, self.ambient);
        }
        let mut m = Mat::zeros(&self.field, self.basis.len(), self.ambient);
        for (i, s) in self.basis.iter().enumerate() {
            for j in 0..self.ambient {
                let e = Vector::basis(&self.field, self.ambient, j);
                m.set(i, j, form_eval(&e, s).expect("same space"));
            }
        }
        Subspace::span(&self.field, self.ambient, &m.kernel())
    }

    /// True iff the form vanishes identically on the subspace.
    pub fn is_isotropic(&self) -> bool {
        for (i, u) in self.basis.iter().enumerate() {
            for v in &self.basis[i + 1..] {
                if !form_eval(u, v).expect("same space").is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// First echelon basis vector not contained in `avoid`.
    pub fn rep_outside(&self, avoid: &Subspace) -> Option<Vector> {
        self.basis.iter().find(|v| !avoid.contains(v)).cloned()
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "subspace dim {} of {}", self.dim(), self.ambient)?;
        for b in &self.basis {
            writeln!(f, "  {b:?}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubspaceOp {
    /// Span of the two generating sets together (the same space as `Sum`).
    Span,
    Sum,
    Intersect,
    Contains,
    Equals,
}

/// Checked subspace algebra on a shared ambient space.
pub fn subspace_algebra(
    a: &Subspace,
    b: &Subspace,
    op: SubspaceOp,
) -> Result<SubspaceOpResult, SymlinError> {
    if a.ambient != b.ambient {
        return Err(SymlinError::LengthMismatch);
    }
    if a.field != b.field {
        return Err(SymlinError::FieldMismatch);
    }
    Ok(match op {
        SubspaceOp::Span | SubspaceOp::Sum => SubspaceOpResult::Space(a.sum(b)),
        SubspaceOp::Intersect => SubspaceOpResult::Space(a.intersect(b)),
        SubspaceOp::Contains => SubspaceOpResult::Flag(a.contains_subspace(b)),
        SubspaceOp::Equals => SubspaceOpResult::Flag(a == b),
    })
}

#[derive(Debug, Clone)]
pub enum SubspaceOpResult {
    Space(Subspace),
    Flag(bool),
}

/// Finds `v` in `space` with prescribed form values against the given
/// vectors, optionally outside `avoid`. Free coordinates resolve to zero, so
/// the answer is deterministic.
pub fn solve_form_constraints(
    space: &Subspace,
    constraints: &[(Vector, FieldElement)],
    avoid: Option<&Subspace>,
) -> Option<Vector> {
    let field = &space.field;
    let k = space.dim();
    if k == 0 {
        return None;
    }
    let mut m = Mat::zeros(field, constraints.len().max(1), k);
    let mut rhs = Vector::zero(field, constraints.len().max(1));
    for (i, (w, target)) in constraints.iter().enumerate() {
        for (a, b) in space.basis.iter().enumerate() {
            m.set(i, a, form_eval(b, w).expect("same space"));
        }
        rhs.set_coord(i, target.clone());
    }
    let embed = |t: &Vector| -> Vector {
        let mut v = Vector::zero(field, space.ambient);
        for (a, b) in space.basis.iter().enumerate() {
            v = v.add_scaled(b, t.coord(a));
        }
        v
    };
    let particular = m.solve(&rhs)?;
    let Some(avoid) = avoid else {
        return Some(embed(&particular));
    };
    let kernel = m.kernel();
    let cand = embed(&particular);
    if !avoid.contains(&cand) {
        return Some(cand);
    }
    for k1 in &kernel {
        let c = embed(&particular.add(k1));
        if !avoid.contains(&c) {
            return Some(c);
        }
    }
    for (i, k1) in kernel.iter().enumerate() {
        for k2 in &kernel[i + 1..] {
            let c = embed(&particular.add(k1).add(k2));
            if !avoid.contains(&c) {
                return Some(c);
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Basis changes.

/// An invertible linear map given by the images of the standard basis
/// (columns).
#[derive(Clone, PartialEq, Eq)]
pub struct BasisChange {
    mat: Mat,
}

impl BasisChange {
    pub fn identity(field: &Field, dim: usize) -> Self {
        BasisChange {
            mat: Mat::identity(field, dim),
        }
    }

    pub fn from_cols(field: &Field, cols: &[Vector]) -> Self {
        BasisChange {
            mat: Mat::from_cols(field, cols),
        }
    }

    pub fn matrix(&self) -> &Mat {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn col(&self, j: usize) -> Vector {
        self.mat.col(j)
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        self.mat.mul_vec(v)
    }

    /// `self` followed by reading `other`'s columns in `self`'s image basis:
    /// the matrix product `self * other`.
    pub fn then(&self, other: &BasisChange) -> BasisChange {
        BasisChange {
            mat: self.mat.mul(&other.mat),
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.mat.rank() == self.mat.rows()
    }

    /// Checks `(M e_s, M e_t) = (e_s, e_t)` on all basis pairs.
    pub fn is_symplectic(&self) -> bool {
        let d = self.dim();
        if !d.is_multiple_of(2) {
            return false;
        }
        let field = self.mat.field().clone();
        for s in 0..d {
            for t in s + 1..d {
                let lhs = form_eval(&self.col(s), &self.col(t)).expect("same space");
                if lhs != standard_form_value(&field, s, t) {
                    return false;
                }
            }
        }
        true
    }
}

impl std::fmt::Debug for BasisChange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.mat)
    }
}

/// Completes a consistent partial assignment of standard-basis slots to a
/// full symplectic basis. `partial` maps slot indices (in `x1,y1,...`
/// order) to vectors; their mutual form values must already be standard.
pub fn extend_standard_basis(
    field: &Field,
    n: usize,
    partial: &[(usize, Vector)],
) -> Result<BasisChange, SymlinError> {
    let dim = 2 * n;
    let mut placed: Vec<Option<Vector>> = vec![None; dim];
    for (slot, v) in partial {
        if *slot >= dim || v.dim() != dim {
            return Err(SymlinError::InvalidParams("slot or vector out of range".into()));
        }
        if placed[*slot].is_some() {
            return Err(SymlinError::InvalidParams(format!("slot {slot} given twice")));
        }
        if v.is_zero() {
            return Err(SymlinError::Dependent);
        }
        placed[*slot] = Some(v.clone());
    }
    // mutual consistency
    for (s, v) in partial {
        for (t, w) in partial {
            if s >= t {
                continue;
            }
            if form_eval(v, w)? != standard_form_value(field, *s, *t) {
                return Err(SymlinError::InconsistentPairing);
            }
        }
    }
    let given: Vec<Vector> = partial.iter().map(|(_, v)| v.clone()).collect();
    if !given.is_empty() {
        let rank = Mat::from_rows(field, &given).rank();
        if rank != given.len() {
            return Err(SymlinError::Dependent);
        }
    }
    let full = Subspace::full(field, dim);
    for slot in 0..dim {
        if placed[slot].is_some() {
            continue;
        }
        let constraints: Vec<(Vector, FieldElement)> = placed
            .iter()
            .enumerate()
            .filter_map(|(t, w)| {
                w.as_ref()
                    .map(|w| (w.clone(), standard_form_value(field, slot, t)))
            })
            .collect();
        let occupied: Vec<Vector> = placed.iter().flatten().cloned().collect();
        let span = Subspace::span(field, dim, &occupied);
        let v = solve_form_constraints(&full, &constraints, Some(&span))
            .ok_or(SymlinError::NoCompletion)?;
        placed[slot] = Some(v);
    }
    let cols: Vec<Vector> = placed.into_iter().map(|v| v.unwrap()).collect();
    let change = BasisChange::from_cols(field, &cols);
    if !change.is_symplectic() {
        return Err(SymlinError::NoCompletion);
    }
    Ok(change)
}

/// Splits a subspace on which the form is non-degenerate into hyperbolic
/// pairs, returned in slot order `x1, y1, x2, y2, ...`.
pub fn symplectic_basis_of(space: &Subspace) -> Result<Vec<Vector>, SymlinError> {
    if !space.dim().is_multiple_of(2) {
        return Err(SymlinError::DegenerateRestriction);
    }
    let mut rest: Vec<Vector> = space.basis.to_vec();
    let mut out = Vec::new();
    while let Some(u) = rest.first().cloned() {
        rest.remove(0);
        let partner = rest
            .iter()
            .position(|w| !form_eval(&u, w).expect("same space").is_zero())
            .ok_or(SymlinError::DegenerateRestriction)?;
        let w0 = rest.remove(partner);
        let c = form_eval(&u, &w0).expect("same space");
        let w = w0.scale(&c.inv()?);
        for r in rest.iter_mut() {
            let a = form_eval(r, &w).expect("same space");
            let b = form_eval(r, &u).expect("same space");
            // r - (r,w) u + (r,u) w is orthogonal to both u and w
            *r = r.sub(&u.scale(&a)).add(&w.scale(&b));
        }
        out.push(u);
        out.push(w);
    }
    Ok(out)
}

/// A deterministic random symplectic transformation: a product of `steps`
/// random symplectic transvections `u -> u + c (u,v) v` interleaved with
/// occasional pair swaps and pair permutations.
pub fn random_symplectic(
    field: &Field,
    n: usize,
    seed: u64,
    steps: usize,
) -> Result<BasisChange, SymlinError> {
    if steps == 0 {
        return Err(SymlinError::InvalidParams("steps must be at least 1".into()));
    }
    let dim = 2 * n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vector> = (0..dim).map(|k| Vector::basis(field, dim, k)).collect();

    let table = match field.order() {
        Some(_) => crate::gf::elements(field).expect("finite"),
        None => Vec::new(),
    };
    let random_element = |rng: &mut ChaCha8Rng| -> FieldElement {
        match field.order() {
            Some(q) => table[rng.gen_range(0..q) as usize].clone(),
            None => FieldElement::from_int(field, rng.gen_range(-3i64..=3)),
        }
    };
    let random_nonzero = |rng: &mut ChaCha8Rng| -> FieldElement {
        loop {
            let e = random_element(rng);
            if !e.is_zero() {
                return e;
            }
        }
    };

    for _ in 0..steps {
        match rng.gen_range(0..10) {
            0 => {
                // x_k -> y_k, y_k -> -x_k
                let k = rng.gen_range(0..n);
                let x = cols[2 * k].clone();
                let y = cols[2 * k + 1].clone();
                cols[2 * k] = y;
                cols[2 * k + 1] = x.neg();
            }
            1 if n > 1 => {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                if a != b {
                    cols.swap(2 * a, 2 * b);
                    cols.swap(2 * a + 1, 2 * b + 1);
                }
            }
            _ => {
                let v = loop {
                    let cand = Vector::new((0..dim).map(|_| random_element(&mut rng)).collect());
                    if !cand.is_zero() {
                        break cand;
                    }
                };
                let c = random_nonzero(&mut rng);
                for col in cols.iter_mut() {
                    let f = form_eval(col, &v).expect("same space");
                    *col = col.add(&v.scale(&f.mul(&c)));
                }
            }
        }
    }
    let change = BasisChange::from_cols(field, &cols);
    debug_assert!(change.is_symplectic());
    Ok(change)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;
    use proptest::prelude::*;

    fn f3() -> Field {
        FieldSpec::prime(3).unwrap()
    }

    fn basis_vec(field: &Field, dim: usize, k: usize) -> Vector {
        Vector::basis(field, dim, k)
    }

    #[test]
    fn form_on_standard_basis() {
        let f = f3();
        let x1 = basis_vec(&f, 10, x_slot(1));
        let y1 = basis_vec(&f, 10, y_slot(1));
        let x2 = basis_vec(&f, 10, x_slot(2));
        assert!(form_eval(&x1, &y1).unwrap().is_one());
        assert!(form_eval(&x1, &x2).unwrap().is_zero());
        assert_eq!(form_eval(&y1, &x1).unwrap(), FieldElement::from_int(&f, -1));
    }

    #[test]
    fn subspace_examples() {
        let f = f3();
        let x1 = basis_vec(&f, 10, x_slot(1));
        let y1 = basis_vec(&f, 10, y_slot(1));
        let a = Subspace::span(&f, 10, &[x1.clone()]);
        let b = Subspace::span(&f, 10, &[y1]);
        assert_eq!(a.sum(&b).dim(), 2);

        let x2 = basis_vec(&f, 10, x_slot(2));
        let x3 = basis_vec(&f, 10, x_slot(3));
        let u = Subspace::span(&f, 10, &[x1, x2.clone()]);
        let w = Subspace::span(&f, 10, &[x2.clone(), x3]);
        let i = u.intersect(&w);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&x2));
    }

    #[test]
    fn subspace_op_dispatcher() {
        let f = f3();
        let a = Subspace::span(&f, 10, &[basis_vec(&f, 10, x_slot(1))]);
        let b = Subspace::span(&f, 10, &[basis_vec(&f, 10, y_slot(1))]);
        match subspace_algebra(&a, &b, SubspaceOp::Span).unwrap() {
            SubspaceOpResult::Space(s) => assert_eq!(s.dim(), 2),
            _ => panic!("expected a space"),
        }
        match subspace_algebra(&a, &a, SubspaceOp::Equals).unwrap() {
            SubspaceOpResult::Flag(v) => assert!(v),
            _ => panic!("expected a flag"),
        }
        let c = Subspace::span(&FieldSpec::prime(5).unwrap(), 10, &[]);
        assert!(matches!(
            subspace_algebra(&a, &c, SubspaceOp::Sum),
            Err(SymlinError::FieldMismatch)
        ));
    }

    #[test]
    fn contains_example() {
        let f = f3();
        let x3 = basis_vec(&f, 10, x_slot(3));
        let x4 = basis_vec(&f, 10, x_slot(4));
        let x5 = basis_vec(&f, 10, x_slot(5));
        let s = Subspace::span(&f, 10, &[x3, x4.clone(), x5.clone()]);
        assert!(s.contains(&x4.add(&x5)));
    }

    #[test]
    fn perp_of_three_x_lines() {
        let f = f3();
        let x3 = basis_vec(&f, 10, x_slot(3));
        let x4 = basis_vec(&f, 10, x_slot(4));
        let x5 = basis_vec(&f, 10, x_slot(5));
        let s = Subspace::span(&f, 10, &[x3, x4, x5]);
        let p = s.perp();
        assert_eq!(p.dim(), 7);
        for i in 1..=5 {
            assert!(p.contains(&basis_vec(&f, 10, x_slot(i))));
        }
        assert!(p.contains(&basis_vec(&f, 10, y_slot(1))));
        assert!(p.contains(&basis_vec(&f, 10, y_slot(2))));
        assert!(!p.contains(&basis_vec(&f, 10, y_slot(3))));
    }

    #[test]
    fn perp_of_full_space_is_zero() {
        let f = f3();
        assert!(Subspace::full(&f, 10).perp().is_zero());
    }

    #[test]
    fn extension_from_empty_is_identity() {
        let f = f3();
        let m = extend_standard_basis(&f, 5, &[]).unwrap();
        assert_eq!(m, BasisChange::identity(&f, 10));
    }

    #[test]
    fn extension_of_swapped_pair() {
        let f = f3();
        let x1 = basis_vec(&f, 2, 0);
        let y1 = basis_vec(&f, 2, 1);
        let m = extend_standard_basis(&f, 1, &[(0, y1), (1, x1.neg())]).unwrap();
        assert!(m.is_symplectic());
    }

    #[test]
    fn extension_rejects_inconsistent_pairs() {
        let f = f3();
        let x1 = basis_vec(&f, 4, 0);
        let x2 = basis_vec(&f, 4, 2);
        // both slots are x-slots, but the vectors pair to 1
        let y1 = basis_vec(&f, 4, 1);
        match extend_standard_basis(&f, 2, &[(0, x1), (2, y1)]) {
            Err(SymlinError::InconsistentPairing) => {}
            other => panic!("unexpected {other:?}"),
        }
        let m = extend_standard_basis(&f, 2, &[(0, x2)]).unwrap();
        assert!(m.is_symplectic());
    }

    #[test]
    fn extension_places_random_isotropic_vector() {
        let f = f3();
        for seed in 0..10u64 {
            let m = random_symplectic(&f, 5, seed, 25).unwrap();
            let v = m.col(x_slot(5));
            let ext = extend_standard_basis(&f, 5, &[(x_slot(5), v.clone())]).unwrap();
            assert!(ext.is_symplectic());
            assert_eq!(ext.col(x_slot(5)), v);
        }
    }

    #[test]
    fn random_symplectic_is_deterministic_and_symplectic() {
        let f = f3();
        let a = random_symplectic(&f, 5, 7, 40).unwrap();
        let b = random_symplectic(&f, 5, 7, 40).unwrap();
        assert_eq!(a, b);
        assert!(a.is_symplectic());
        assert!(random_symplectic(&f, 5, 7, 0).is_err());
    }

    #[test]
    fn hundred_random_symplectics_pass_the_form_check() {
        let f = f3();
        for seed in 0..100u64 {
            assert!(random_symplectic(&f, 5, seed, 40).unwrap().is_symplectic());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn perp_dimensions_and_involution(seed in 0u64..500, k in 0usize..6) {
            let f = f3();
            let m = random_symplectic(&f, 5, seed, 20).unwrap();
            let vectors: Vec<Vector> = (0..k).map(|j| m.col(j)).collect();
            let s = Subspace::span(&f, 10, &vectors);
            let p = s.perp();
            prop_assert_eq!(s.dim() + p.dim(), 10);
            prop_assert_eq!(p.perp(), s);
        }

        #[test]
        fn alternating_on_random_vectors(seed in 0u64..500) {
            let f = f3();
            let m = random_symplectic(&f, 5, seed, 10).unwrap();
            let v = m.col(0);
            prop_assert!(form_eval(&v, &v).unwrap().is_zero());
        }
    }
}
