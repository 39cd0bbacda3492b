//! The catalog of ten-dimensional nilpotent algebras.
//!
//! Thirteen families cover every nilpotent algebra of dimension ten whose
//! centre is non-isotropic or isotropic of dimension three or five. Eight of
//! them are rigid; the other five carry parameters whose isomorphism classes
//! are cut out by cube classes and by the groups `G(r,s)`, `G(s)` and
//! `H(r)`. This module instantiates the catalog presentations, decides
//! parameter equivalence, picks least canonical representatives, produces
//! the explicit symplectic substitutions witnessing an equivalence, and
//! counts isomorphism classes per finite field.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Presentation};
use crate::gf::{
    self, cube_classes, cube_coset_min, is_square, least_nonsquare, quad_irreducible,
    special_group, Field, FieldElement, GfError, SpecialGroup,
};
use crate::symlin::{x_slot, y_slot, BasisChange, SymlinError, Vector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamiliesError {
    #[error("labels have different family tags")]
    TagMismatch,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("operation requires a finite field")]
    InfiniteField,
    #[error("no equivalence witness: {0}")]
    NoWitness(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Lin(#[from] SymlinError),
}

/// Family tags in catalog order. `Q*` families have non-isotropic centre of
/// the indicated dimension; `P*` families have isotropic centre (dimension
/// five for `P51`, three for the rest).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyTag {
    Q71,
    Q51,
    Q41,
    P51,
    P31,
    P32,
    P33,
    P34,
    P35,
    P36,
    P37,
    P38,
    P39,
}

pub const ALL_TAGS: [FamilyTag; 13] = [
    FamilyTag::Q71,
    FamilyTag::Q51,
    FamilyTag::Q41,
    FamilyTag::P51,
    FamilyTag::P31,
    FamilyTag::P32,
    FamilyTag::P33,
    FamilyTag::P34,
    FamilyTag::P35,
    FamilyTag::P36,
    FamilyTag::P37,
    FamilyTag::P38,
    FamilyTag::P39,
];

impl FamilyTag {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyTag::Q71 => "Q10_7_1",
            FamilyTag::Q51 => "Q10_5_1",
            FamilyTag::Q41 => "Q10_4_1",
            FamilyTag::P51 => "P10_5_1",
            FamilyTag::P31 => "P10_3_1",
            FamilyTag::P32 => "P10_3_2",
            FamilyTag::P33 => "P10_3_3",
            FamilyTag::P34 => "P10_3_4",
            FamilyTag::P35 => "P10_3_5",
            FamilyTag::P36 => "P10_3_6",
            FamilyTag::P37 => "P10_3_7",
            FamilyTag::P38 => "P10_3_8",
            FamilyTag::P39 => "P10_3_9",
        }
    }

    pub fn param_count(&self) -> usize {
        match self {
            FamilyTag::Q41 | FamilyTag::P36 | FamilyTag::P37 => 1,
            FamilyTag::P38 => 2,
            FamilyTag::P39 => 3,
            _ => 0,
        }
    }

    pub fn from_name(name: &str) -> Option<FamilyTag> {
        ALL_TAGS.iter().copied().find(|t| t.name() == name)
    }
}

/// A family tag together with its parameter tuple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FamilyLabel {
    pub tag: FamilyTag,
    pub params: Vec<FieldElement>,
}

impl FamilyLabel {
    pub fn plain(tag: FamilyTag) -> Self {
        FamilyLabel {
            tag,
            params: Vec::new(),
        }
    }

    pub fn with_params(tag: FamilyTag, params: Vec<FieldElement>) -> Self {
        FamilyLabel { tag, params }
    }

    /// Validates the parameter tuple against the family constraints over
    /// the given field.
    pub fn validate(&self, field: &Field) -> Result<(), FamiliesError> {
        if self.params.len() != self.tag.param_count() {
            return Err(FamiliesError::InvalidParams(format!(
                "{} takes {} parameter(s), got {}",
                self.tag.name(),
                self.tag.param_count(),
                self.params.len()
            )));
        }
        for p in &self.params {
            if p.field() != field {
                return Err(FamiliesError::InvalidParams(
                    "parameter lies in a different field".into(),
                ));
            }
        }
        match self.tag {
            FamilyTag::Q41 | FamilyTag::P36 | FamilyTag::P37 => {
                if self.params[0].is_zero() {
                    return Err(FamiliesError::InvalidParams("parameter r must be nonzero".into()));
                }
            }
            FamilyTag::P38 => {
                let (r, s) = (&self.params[0], &self.params[1]);
                if r.is_zero() {
                    return Err(FamiliesError::InvalidParams("parameter r must be nonzero".into()));
                }
                if is_square(s)? {
                    return Err(FamiliesError::InvalidParams(
                        "parameter s must be a non-square".into(),
                    ));
                }
            }
            FamilyTag::P39 => {
                if field.characteristic() != 2 {
                    return Err(FamiliesError::InvalidParams(
                        "this family only exists in characteristic two".into(),
                    ));
                }
                let (g, r, s) = (&self.params[0], &self.params[1], &self.params[2]);
                if g.is_zero() || r.is_zero() {
                    return Err(FamiliesError::InvalidParams(
                        "parameters gamma and r must be nonzero".into(),
                    ));
                }
                if !quad_irreducible(r, s)? {
                    return Err(FamiliesError::InvalidParams(
                        "t^2 + rt + s must be irreducible".into(),
                    ));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

impl fmt::Display for FamilyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag.name())?;
        if !self.params.is_empty() {
            let parts: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", parts.join(","))?;
        }
        Ok(())
    }
}

/// Parses `P10_3_6(2)` style labels; parameters are read in the given field.
pub fn parse_label(field: &Field, text: &str) -> Result<FamilyLabel, FamiliesError> {
    let t = text.trim();
    let (name, params) = match t.split_once('(') {
        None => (t, Vec::new()),
        Some((name, rest)) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| FamiliesError::InvalidParams(format!("bad label `{t}`")))?;
            let mut params = Vec::new();
            let mut depth = 0usize;
            let mut cur = String::new();
            for ch in inner.chars() {
                match ch {
                    '[' => {
                        depth += 1;
                        cur.push(ch);
                    }
                    ']' => {
                        depth -= 1;
                        cur.push(ch);
                    }
                    ',' if depth == 0 => {
                        params.push(cur.clone());
                        cur.clear();
                    }
                    _ => cur.push(ch),
                }
            }
            if !cur.is_empty() {
                params.push(cur);
            }
            let parsed: Result<Vec<FieldElement>, GfError> = params
                .iter()
                .map(|p| FieldElement::parse(field, p))
                .collect();
            (name, parsed?)
        }
    };
    let tag = FamilyTag::from_name(name)
        .ok_or_else(|| FamiliesError::InvalidParams(format!("unknown family `{name}`")))?;
    let label = FamilyLabel::with_params(tag, params);
    label.validate(field)?;
    Ok(label)
}

/// The catalog presentation of a family instance.
pub fn instantiate(field: &Field, label: &FamilyLabel) -> Result<Presentation, FamiliesError> {
    label.validate(field)?;
    let one = FieldElement::one(field);
    let mut triples: Vec<(usize, usize, usize, FieldElement)> = Vec::new();
    let mut t = |a: usize, b: usize, c: usize, v: &FieldElement| {
        triples.push((a, b, c, v.clone()));
    };
    match label.tag {
        FamilyTag::Q71 => {
            t(y_slot(1), y_slot(2), y_slot(3), &one);
        }
        FamilyTag::Q51 => {
            t(y_slot(1), y_slot(2), y_slot(3), &one);
            t(x_slot(1), y_slot(3), y_slot(4), &one);
        }
        FamilyTag::Q41 => {
            let r = &label.params[0];
            t(x_slot(2), y_slot(3), y_slot(4), r);
            t(x_slot(1), y_slot(2), y_slot(4), &one);
            t(y_slot(1), y_slot(2), y_slot(3), &one);
        }
        FamilyTag::P51 => {
            t(y_slot(1), y_slot(2), y_slot(3), &one);
            t(y_slot(1), y_slot(4), y_slot(5), &one);
        }
        FamilyTag::P31 => {
            t(x_slot(1), y_slot(3), y_slot(5), &one);
            t(x_slot(2), y_slot(4), y_slot(5), &one);
            t(y_slot(1), y_slot(2), y_slot(5), &one);
        }
        FamilyTag::P32 => {
            t(x_slot(2), y_slot(4), y_slot(5), &one);
            t(x_slot(1), y_slot(3), y_slot(5), &one);
            t(y_slot(1), y_slot(2), y_slot(5), &one);
            t(y_slot(2), y_slot(3), y_slot(4), &one);
        }
        FamilyTag::P33 => {
            t(x_slot(2), y_slot(4), y_slot(5), &one);
            t(x_slot(1), y_slot(3), y_slot(4), &one);
            t(y_slot(1), y_slot(2), y_slot(5), &one);
        }
        FamilyTag::P34 => {
            t(x_slot(1), y_slot(2), y_slot(5), &one);
            t(y_slot(1), y_slot(2), y_slot(3), &one);
            t(x_slot(2), y_slot(4), y_slot(5), &one);
        }
        FamilyTag::P35 => {
            t(x_slot(1), y_slot(2), y_slot(5), &one);
            t(y_slot(1), y_slot(2), y_slot(3), &one);
            t(x_slot(1), y_slot(3), y_slot(4), &one);
            t(x_slot(2), y_slot(4), y_slot(5), &one);
        }
        FamilyTag::P36 => {
            let r = &label.params[0];
            t(x_slot(2), y_slot(4), y_slot(5), r);
            t(x_slot(1), y_slot(2), y_slot(4), &one);
            t(y_slot(1), y_slot(2), y_slot(5), &one);
            t(y_slot(1), y_slot(3), y_slot(5), &one);
        }
        FamilyTag::P37 => {
            let r = &label.params[0];
            t(x_slot(2), y_slot(4), y_slot(5), r);
            t(x_slot(1), y_slot(2), y_slot(4), &one);
            t(y_slot(1), y_slot(2), y_slot(5), &one);
            t(y_slot(1), y_slot(3), y_slot(4), &one);
        }
        FamilyTag::P38 => {
            let (r, s) = (&label.params[0], &label.params[1]);
            t(x_slot(2), y_slot(4), y_slot(5), r);
            t(x_slot(1), y_slot(3), y_slot(5), s);
            t(x_slot(1), y_slot(2), y_slot(4), &one);
            t(y_slot(1), y_slot(2), y_slot(5), &one);
            t(y_slot(1), y_slot(3), y_slot(4), &one);
        }
        FamilyTag::P39 => {
            let (g, r, s) = (&label.params[0], &label.params[1], &label.params[2]);
            t(x_slot(2), y_slot(4), y_slot(5), g);
            t(x_slot(1), y_slot(3), y_slot(4), r);
            t(x_slot(1), y_slot(3), y_slot(5), s);
            t(x_slot(1), y_slot(2), y_slot(4), &one);
            t(y_slot(1), y_slot(2), y_slot(5), &one);
            t(y_slot(1), y_slot(3), y_slot(4), &one);
        }
    }
    let mut pres = Presentation::new(field, 5);
    for (a, b, c, v) in triples {
        pres.insert(a, b, c, v)?;
    }
    Ok(pres)
}

fn ratio(a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FamiliesError> {
    Ok(a.div(b)?)
}

fn in_cubes(e: &FieldElement) -> Result<bool, FamiliesError> {
    Ok(gf::is_cube(e)?)
}

/// Decides whether two instances of the same family are isomorphic.
pub fn param_equivalent(
    field: &Field,
    a: &FamilyLabel,
    b: &FamilyLabel,
) -> Result<bool, FamiliesError> {
    if a.tag != b.tag {
        return Err(FamiliesError::TagMismatch);
    }
    a.validate(field)?;
    b.validate(field)?;
    if !field.is_finite() {
        return Err(FamiliesError::InfiniteField);
    }
    match a.tag {
        FamilyTag::Q41 | FamilyTag::P36 | FamilyTag::P37 => {
            in_cubes(&ratio(&b.params[0], &a.params[0])?)
        }
        FamilyTag::P38 => {
            let (r, s) = (&a.params[0], &a.params[1]);
            let (rt, st) = (&b.params[0], &b.params[1]);
            if !in_cubes(&ratio(rt, r)?)? {
                return Ok(false);
            }
            let g = special_group(field, &SpecialGroup::GSquare(s.clone()))?;
            Ok(g.contains(&ratio(s, st)?))
        }
        FamilyTag::P39 => {
            let (g0, r, s) = (&a.params[0], &a.params[1], &a.params[2]);
            let (g1, rt, st) = (&b.params[0], &b.params[1], &b.params[2]);
            if !in_cubes(&ratio(g1, g0)?)? {
                return Ok(false);
            }
            let gr = special_group(field, &SpecialGroup::G(r.clone(), s.clone()))?;
            let q = ratio(rt, r)?;
            if !gr.contains(&q) {
                return Ok(false);
            }
            let h = special_group(field, &SpecialGroup::H(rt.clone()))?;
            Ok(h.contains(&st.sub(&q.square().mul(s))))
        }
        _ => Ok(true),
    }
}

/// The least parameter tuple equivalent to the input, under the element
/// order extended lexicographically.
pub fn canonical_params(field: &Field, label: &FamilyLabel) -> Result<FamilyLabel, FamiliesError> {
    label.validate(field)?;
    if label.tag.param_count() == 0 {
        return Ok(label.clone());
    }
    if !field.is_finite() {
        return Err(FamiliesError::InfiniteField);
    }
    let out = match label.tag {
        FamilyTag::Q41 | FamilyTag::P36 | FamilyTag::P37 => {
            FamilyLabel::with_params(label.tag, vec![cube_coset_min(&label.params[0])?])
        }
        FamilyTag::P38 => {
            // r and s move independently: r within its cube coset, s over
            // every reachable non-square (all of them, over a finite field)
            let r = cube_coset_min(&label.params[0])?;
            let s0 = least_nonsquare(field)?
                .ok_or_else(|| FamiliesError::InvalidParams("no non-square in the field".into()))?;
            FamilyLabel::with_params(label.tag, vec![r, s0])
        }
        FamilyTag::P39 => {
            let (g0, r, s) = (&label.params[0], &label.params[1], &label.params[2]);
            let g_min = cube_coset_min(g0)?;
            let gr = special_group(field, &SpecialGroup::G(r.clone(), s.clone()))?;
            let mut candidates: Vec<(FieldElement, FieldElement)> = Vec::new();
            for rt in gf::nonzero_elements(field)? {
                let q = ratio(&rt, r)?;
                if !gr.contains(&q) {
                    continue;
                }
                // every element of the reachable H(rt)-coset keeps the
                // quadratic irreducible, so the least one is valid
                let h = special_group(field, &SpecialGroup::H(rt.clone()))?;
                let shift = q.square().mul(s);
                let st = h
                    .members()
                    .iter()
                    .map(|x| x.add(&shift))
                    .min()
                    .expect("H is nonempty");
                candidates.push((rt, st));
            }
            let (rt, st) = candidates
                .into_iter()
                .min()
                .ok_or_else(|| FamiliesError::NoWitness("no reachable parameters".into()))?;
            FamilyLabel::with_params(label.tag, vec![g_min, rt, st])
        }
        _ => unreachable!(),
    };
    debug_assert!(param_equivalent(field, label, &out)?);
    Ok(out)
}

fn cube_root_of(field: &Field, target: &FieldElement) -> Result<FieldElement, FamiliesError> {
    for b in gf::nonzero_elements(field)? {
        if b.mul(&b).mul(&b) == *target {
            return Ok(b);
        }
    }
    Err(FamiliesError::NoWitness("target is not a cube".into()))
}

/// Builds the explicit symplectic substitution turning the presentation of
/// `from` into the presentation of `to` (which must be equivalent). The
/// witness is verified before it is returned.
pub fn equivalence_witness(
    field: &Field,
    from: &FamilyLabel,
    to: &FamilyLabel,
) -> Result<BasisChange, FamiliesError> {
    if !param_equivalent(field, from, to)? {
        return Err(FamiliesError::NoWitness("labels are not equivalent".into()));
    }
    let dim = 10;
    let e = |k: usize| Vector::basis(field, dim, k);
    let mut cols: Vec<Vector> = (0..dim).map(e).collect();

    // scale pair i by c on the y side: y_i *= c, x_i *= 1/c
    let scale_pair = |cols: &mut Vec<Vector>, i: usize, c: &FieldElement| {
        cols[y_slot(i)] = cols[y_slot(i)].scale(c);
        cols[x_slot(i)] = cols[x_slot(i)].scale(&c.inv().expect("nonzero scale"));
    };

    match from.tag {
        FamilyTag::Q41 => {
            let b = cube_root_of(field, &ratio(&to.params[0], &from.params[0])?)?;
            scale_pair(&mut cols, 1, &b);
            scale_pair(&mut cols, 2, &b.inv()?);
            scale_pair(&mut cols, 4, &b.square());
        }
        FamilyTag::P36 | FamilyTag::P37 => {
            let b = cube_root_of(field, &ratio(&to.params[0], &from.params[0])?)?;
            let binv = b.inv()?;
            scale_pair(&mut cols, 2, &binv);
            scale_pair(&mut cols, 3, &binv);
            scale_pair(&mut cols, 4, &b);
            scale_pair(&mut cols, 5, &b);
        }
        FamilyTag::P38 => {
            let (r, s) = (&from.params[0], &from.params[1]);
            let (rt, st) = (&to.params[0], &to.params[1]);
            // beta^3 = r / r~
            let beta = cube_root_of(field, &ratio(r, rt)?)?;
            // (a, b) with s/s~ = ((b/beta)^2 - s (a/beta)^2)^2
            let target = ratio(s, st)?;
            let mut found = None;
            'outer: for a in gf::elements(field)? {
                for b in gf::elements(field)? {
                    if a.is_zero() && b.is_zero() {
                        continue;
                    }
                    let bb = ratio(&b, &beta)?;
                    let aa = ratio(&a, &beta)?;
                    if bb.square().sub(&s.mul(&aa.square())).square() == target {
                        found = Some((a, b));
                        break 'outer;
                    }
                }
            }
            let (a, b) = found.ok_or_else(|| FamiliesError::NoWitness("no (a,b) pair".into()))?;
            let denom = b.square().sub(&a.square().mul(s));
            let alpha = beta.pow(3)?.div(&denom)?;
            let beta2 = beta.square();
            let beta3 = beta.pow(3)?;
            cols[x_slot(1)] = e(x_slot(1))
                .scale(&b)
                .add(&e(y_slot(1)).scale(&a.mul(s)))
                .scale(&alpha.div(&beta2)?);
            cols[y_slot(1)] = e(y_slot(1)).scale(&b).add(&e(x_slot(1)).scale(&a)).scale(&beta.inv()?);
            cols[x_slot(2)] = e(x_slot(2)).scale(&beta.inv()?);
            cols[y_slot(2)] = e(y_slot(2)).scale(&beta);
            cols[x_slot(3)] = e(x_slot(3)).scale(&alpha.inv()?);
            cols[y_slot(3)] = e(y_slot(3)).scale(&alpha);
            cols[x_slot(4)] = e(x_slot(4))
                .scale(&b)
                .add(&e(x_slot(5)).scale(&a.mul(s)))
                .scale(&alpha.div(&beta)?);
            cols[y_slot(4)] = e(y_slot(4)).scale(&b).sub(&e(y_slot(5)).scale(&a)).scale(&beta2.inv()?);
            cols[x_slot(5)] = e(x_slot(4)).scale(&a).add(&e(x_slot(5)).scale(&b));
            cols[y_slot(5)] = e(y_slot(5))
                .scale(&b)
                .sub(&e(y_slot(4)).scale(&a.mul(s)))
                .scale(&alpha.div(&beta3)?);
        }
        FamilyTag::P39 => {
            let (g0, r, s) = (&from.params[0], &from.params[1], &from.params[2]);
            let (g1, rt, st) = (&to.params[0], &to.params[1], &to.params[2]);
            let beta = cube_root_of(field, &ratio(g0, g1)?)?;
            // (a, b) with r/r~ = (b/beta)^2 + (b/beta)(a/beta) r + (a/beta)^2 s
            let target = ratio(r, rt)?;
            let mut found = None;
            'outer: for a in gf::elements(field)? {
                for b in gf::elements(field)? {
                    if a.is_zero() && b.is_zero() {
                        continue;
                    }
                    let bb = ratio(&b, &beta)?;
                    let aa = ratio(&a, &beta)?;
                    let norm = bb.square().add(&bb.mul(&aa).mul(r)).add(&aa.square().mul(s));
                    if norm == target {
                        found = Some((a, b));
                        break 'outer;
                    }
                }
            }
            let (a, b) = found.ok_or_else(|| FamiliesError::NoWitness("no (a,b) pair".into()))?;
            // delta with s~ - (r~/r)^2 s = (delta/beta)^2 + (delta/beta) r~
            let shift = st.sub(&ratio(rt, r)?.square().mul(s));
            let mut delta = None;
            for d in gf::elements(field)? {
                let db = ratio(&d, &beta)?;
                if db.square().add(&db.mul(rt)) == shift {
                    delta = Some(d);
                    break;
                }
            }
            let delta = delta.ok_or_else(|| FamiliesError::NoWitness("no delta".into()))?;
            let alpha = beta.mul(&ratio(rt, r)?);
            let beta2 = beta.square();
            let beta3 = beta.pow(3)?;
            // column building blocks
            let n_coef = alpha.mul(&a).mul(r).add(&alpha.mul(&b)).add(&delta.mul(&a));
            let m_coef = delta.mul(&b).add(&alpha.mul(&a).mul(s));
            cols[x_slot(1)] = e(x_slot(1))
                .scale(&n_coef)
                .add(&e(y_slot(1)).scale(&m_coef))
                .scale(&beta2.inv()?);
            cols[y_slot(1)] = e(x_slot(1)).scale(&a).add(&e(y_slot(1)).scale(&b)).scale(&beta.inv()?);
            cols[x_slot(2)] = e(x_slot(2))
                .scale(&alpha)
                .add(&e(x_slot(3)).scale(&delta))
                .scale(&alpha.mul(&beta).inv()?);
            cols[y_slot(2)] = e(y_slot(2)).scale(&beta);
            cols[x_slot(3)] = e(x_slot(3)).scale(&alpha.inv()?);
            cols[y_slot(3)] = e(y_slot(3)).scale(&alpha).add(&e(y_slot(2)).scale(&delta));
            cols[x_slot(4)] = e(x_slot(4))
                .scale(&n_coef)
                .add(&e(x_slot(5)).scale(&m_coef))
                .scale(&beta.inv()?);
            cols[y_slot(4)] = e(y_slot(4)).scale(&b).add(&e(y_slot(5)).scale(&a)).scale(&beta2.inv()?);
            cols[x_slot(5)] = e(x_slot(4)).scale(&a).add(&e(x_slot(5)).scale(&b));
            cols[y_slot(5)] = e(y_slot(5))
                .scale(&n_coef)
                .add(&e(y_slot(4)).scale(&m_coef))
                .scale(&beta3.inv()?);
        }
        _ => {
            if from.params != to.params {
                return Err(FamiliesError::NoWitness("rigid family".into()));
            }
        }
    }
    let witness = BasisChange::from_cols(field, &cols);
    if !witness.is_symplectic() {
        return Err(FamiliesError::NoWitness("substitution is not symplectic".into()));
    }
    // verify exactly: the substituted presentation must be the target one
    let alg = Algebra::build(instantiate(field, from)?)?;
    let moved = alg.change_basis(&witness)?;
    let expect = instantiate(field, to)?;
    if moved.presentation() != &expect {
        return Err(FamiliesError::NoWitness("substitution maps to the wrong instance".into()));
    }
    Ok(witness)
}

/// One family's share of a census.
#[derive(Debug, Clone)]
pub struct CensusRow {
    pub tag: FamilyTag,
    pub count: usize,
    pub reps: Vec<FamilyLabel>,
}

/// Isomorphism classes of catalog algebras over one finite field. Families
/// with isotropic centre of dimension two or four are a separate, unsupported
/// bucket and are not counted here.
#[derive(Debug, Clone)]
pub struct Census {
    pub field: Field,
    pub rows: Vec<CensusRow>,
    pub total: usize,
}

/// Enumerates valid parameters of one family, partitions them by
/// equivalence via canonical representatives, and reports the class count.
pub fn census_family(field: &Field, tag: FamilyTag) -> Result<CensusRow, FamiliesError> {
    if !field.is_finite() {
        return Err(FamiliesError::InfiniteField);
    }
    let mut reps: BTreeSet<FamilyLabel> = BTreeSet::new();
    {
        match tag {
            FamilyTag::Q41 | FamilyTag::P36 | FamilyTag::P37 => {
                for class in cube_classes(field)? {
                    reps.insert(FamilyLabel::with_params(tag, vec![class.min().unwrap().clone()]));
                }
            }
            FamilyTag::P38 => {
                // one fixed least non-square is enough: any two non-squares
                // differ by an element of G(s)
                if let Some(s0) = least_nonsquare(field)? {
                    for r in gf::nonzero_elements(field)? {
                        let label = FamilyLabel::with_params(tag, vec![r, s0.clone()]);
                        reps.insert(canonical_params(field, &label)?);
                    }
                }
            }
            FamilyTag::P39 => {
                if field.characteristic() == 2 {
                    let gamma_reps: Vec<FieldElement> = cube_classes(field)?
                        .iter()
                        .map(|c| c.min().unwrap().clone())
                        .collect();
                    for g0 in gamma_reps {
                        for r in gf::nonzero_elements(field)? {
                            for s in gf::elements(field)? {
                                if !quad_irreducible(&r, &s)? {
                                    continue;
                                }
                                let label = FamilyLabel::with_params(
                                    tag,
                                    vec![g0.clone(), r.clone(), s.clone()],
                                );
                                reps.insert(canonical_params(field, &label)?);
                            }
                        }
                    }
                }
            }
            _ => {
                reps.insert(FamilyLabel::plain(tag));
            }
        }
    }
    Ok(CensusRow {
        tag,
        count: reps.len(),
        reps: reps.into_iter().collect(),
    })
}

/// Full census across the catalog.
pub fn census(field: &Field) -> Result<Census, FamiliesError> {
    let mut rows = Vec::new();
    for tag in ALL_TAGS {
        rows.push(census_family(field, tag)?);
    }
    let total = rows.iter().map(|r| r.count).sum();
    Ok(Census {
        field: field.clone(),
        rows,
        total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;

    fn gf(q: u64) -> Field {
        FieldSpec::parse(&format!("gf({q})")).unwrap()
    }

    fn el(field: &Field, k: i64) -> FieldElement {
        FieldElement::from_int(field, k)
    }

    #[test]
    fn p51_instance_matches_catalog() {
        let f = gf(3);
        let p = instantiate(&f, &FamilyLabel::plain(FamilyTag::P51)).unwrap();
        assert_eq!(p.triples().len(), 2);
        assert!(p.value(y_slot(1), y_slot(2), y_slot(3)).is_one());
        assert!(p.value(y_slot(1), y_slot(4), y_slot(5)).is_one());
    }

    #[test]
    fn p34_instance_matches_catalog() {
        let f = gf(5);
        let p = instantiate(&f, &FamilyLabel::plain(FamilyTag::P34)).unwrap();
        assert!(p.value(x_slot(1), y_slot(2), y_slot(5)).is_one());
        assert!(p.value(y_slot(1), y_slot(2), y_slot(3)).is_one());
        assert!(p.value(x_slot(2), y_slot(4), y_slot(5)).is_one());
        assert_eq!(p.triples().len(), 3);
    }

    #[test]
    fn p38_has_no_instance_in_characteristic_two() {
        let f = gf(2);
        let label = FamilyLabel::with_params(FamilyTag::P38, vec![el(&f, 1), el(&f, 1)]);
        assert!(matches!(
            instantiate(&f, &label),
            Err(FamiliesError::InvalidParams(_))
        ));
    }

    #[test]
    fn every_instance_builds_and_is_nilpotent() {
        for q in [2u64, 3, 4, 5, 7, 9] {
            let f = gf(q);
            for row in census(&f).unwrap().rows {
                for rep in row.reps {
                    let alg = Algebra::build(instantiate(&f, &rep).unwrap()).unwrap();
                    assert!(alg.is_nilpotent(), "{rep} over GF({q})");
                }
            }
        }
    }

    #[test]
    fn cube_class_equivalence_for_p36() {
        let f = gf(7);
        let a = FamilyLabel::with_params(FamilyTag::P36, vec![el(&f, 1)]);
        let b = FamilyLabel::with_params(FamilyTag::P36, vec![el(&f, 6)]);
        let c = FamilyLabel::with_params(FamilyTag::P36, vec![el(&f, 2)]);
        assert!(param_equivalent(&f, &a, &b).unwrap());
        assert!(!param_equivalent(&f, &a, &c).unwrap());
        assert!(matches!(
            param_equivalent(&f, &a, &FamilyLabel::plain(FamilyTag::P37)),
            Err(FamiliesError::TagMismatch)
        ));
    }

    #[test]
    fn p39_with_equal_gamma_is_always_equivalent_over_gf4() {
        let f = gf(4);
        let mut labels = Vec::new();
        for r in crate::gf::nonzero_elements(&f).unwrap() {
            for s in crate::gf::elements(&f).unwrap() {
                if quad_irreducible(&r, &s).unwrap() {
                    labels.push(FamilyLabel::with_params(
                        FamilyTag::P39,
                        vec![el(&f, 1), r.clone(), s.clone()],
                    ));
                }
            }
        }
        assert!(labels.len() > 1);
        for a in &labels {
            for b in &labels {
                assert!(param_equivalent(&f, a, b).unwrap(), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn canonical_params_examples() {
        let f7 = gf(7);
        let canon = canonical_params(
            &f7,
            &FamilyLabel::with_params(FamilyTag::P36, vec![el(&f7, 6)]),
        )
        .unwrap();
        assert_eq!(canon.params[0], el(&f7, 1));

        let f3 = gf(3);
        let canon = canonical_params(
            &f3,
            &FamilyLabel::with_params(FamilyTag::Q41, vec![el(&f3, 2)]),
        )
        .unwrap();
        assert_eq!(canon.params[0], el(&f3, 1));

        let plain = FamilyLabel::plain(FamilyTag::P33);
        assert_eq!(canonical_params(&f3, &plain).unwrap(), plain);
    }

    #[test]
    fn canonical_params_is_idempotent() {
        for q in [3u64, 4, 5, 7, 8, 9] {
            let f = gf(q);
            for row in census(&f).unwrap().rows {
                for rep in row.reps {
                    assert_eq!(canonical_params(&f, &rep).unwrap(), rep);
                }
            }
        }
    }

    #[test]
    fn census_totals() {
        let expect: &[(u64, usize)] =
            &[(2, 12), (3, 12), (4, 20), (5, 12), (7, 20), (8, 12), (9, 12)];
        for &(q, total) in expect {
            let c = census(&gf(q)).unwrap();
            assert_eq!(c.total, total, "GF({q})");
        }
    }

    #[test]
    fn census_per_family_breakdown() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let f = gf(q);
            let c = census(&f).unwrap();
            let gcd3 = if (q - 1) % 3 == 0 { 3 } else { 1 };
            for row in &c.rows {
                match row.tag {
                    FamilyTag::Q41 | FamilyTag::P36 | FamilyTag::P37 => {
                        assert_eq!(row.count, gcd3, "{:?} over GF({q})", row.tag)
                    }
                    FamilyTag::P38 => {
                        let expect = if q % 2 == 0 { 0 } else { gcd3 };
                        assert_eq!(row.count, expect, "P38 over GF({q})")
                    }
                    FamilyTag::P39 => {
                        let expect = if q % 2 == 0 { gcd3 } else { 0 };
                        assert_eq!(row.count, expect, "P39 over GF({q})")
                    }
                    _ => assert_eq!(row.count, 1),
                }
            }
        }
    }

    #[test]
    fn witnesses_move_presentations_exactly() {
        // the verification is built into equivalence_witness; exercise it on
        // every within-family pair over small fields
        for q in [3u64, 4, 5, 7] {
            let f = gf(q);
            for tag in [FamilyTag::Q41, FamilyTag::P36, FamilyTag::P37] {
                for r in crate::gf::nonzero_elements(&f).unwrap() {
                    let from = FamilyLabel::with_params(tag, vec![r]);
                    let to = canonical_params(&f, &from).unwrap();
                    equivalence_witness(&f, &from, &to).unwrap();
                }
            }
        }
    }

    #[test]
    fn p38_witnesses_over_odd_fields() {
        for q in [3u64, 5, 7, 9] {
            let f = gf(q);
            for r in crate::gf::nonzero_elements(&f).unwrap() {
                for s in crate::gf::elements(&f).unwrap() {
                    if is_square(&s).unwrap() {
                        continue;
                    }
                    let from = FamilyLabel::with_params(FamilyTag::P38, vec![r.clone(), s]);
                    let to = canonical_params(&f, &from).unwrap();
                    equivalence_witness(&f, &from, &to).unwrap();
                }
            }
        }
    }

    #[test]
    fn p39_witnesses_over_char_two() {
        for q in [2u64, 4, 8] {
            let f = gf(q);
            for g0 in crate::gf::nonzero_elements(&f).unwrap() {
                for r in crate::gf::nonzero_elements(&f).unwrap() {
                    for s in crate::gf::elements(&f).unwrap() {
                        if !quad_irreducible(&r, &s).unwrap() {
                            continue;
                        }
                        let from =
                            FamilyLabel::with_params(FamilyTag::P39, vec![g0.clone(), r.clone(), s]);
                        let to = canonical_params(&f, &from).unwrap();
                        equivalence_witness(&f, &from, &to).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn label_text_round_trip() {
        let f = gf(7);
        for text in ["P10_3_3", "P10_3_6(2)", "P10_3_8(3,5)"] {
            let label = parse_label(&f, text).unwrap();
            assert_eq!(label.to_string(), text);
        }
        let f4 = gf(4);
        let label = parse_label(&f4, "P10_3_9([0,1],[1,0],[0,1])").unwrap();
        assert_eq!(label.to_string(), "P10_3_9([0,1],[1,0],[0,1])");
        assert!(parse_label(&f, "P10_3_6(0)").is_err());
        assert!(parse_label(&f, "nonsense").is_err());
    }
}
