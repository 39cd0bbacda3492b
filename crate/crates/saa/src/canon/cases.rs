//! Constructive normalizations, case by case.
//!
//! Each routine receives a nilpotent algebra of dimension ten whose
//! structure report selects the case, builds a basis adapted to the
//! characteristic flags, and then eliminates the remaining free triple
//! values one at a time with compensated moves. Every step reads the value
//! it kills from the current basis, so the routines are self-correcting;
//! the final presentation is compared against the catalog instance before a
//! label is returned.

use crate::algebra::Algebra;
use crate::families::{FamilyLabel, FamilyTag};
use crate::gf::FieldElement;
use crate::symlin::{
    extend_standard_basis, form_eval, solve_form_constraints, x_slot, y_slot, Subspace, Vector,
};

use super::{
    classify_tau_type, finish, hyperbolic_pair_in, min_poly_2x2, quadratic_roots, CanonError,
    Classification, Flags, Normalizer, StructureReport, TauFrame, TauType, VSquareCase,
};

fn internal(msg: impl Into<String>) -> CanonError {
    CanonError::Internal(msg.into())
}

fn solve_in(
    space: &Subspace,
    constraints: &[(Vector, FieldElement)],
    avoid: Option<&Subspace>,
    what: &str,
) -> Result<Vector, CanonError> {
    solve_form_constraints(space, constraints, avoid)
        .ok_or_else(|| internal(format!("no solution while choosing {what}")))
}

fn rep_outside(space: &Subspace, avoid: &Subspace, what: &str) -> Result<Vector, CanonError> {
    space
        .rep_outside(avoid)
        .ok_or_else(|| internal(format!("no representative while choosing {what}")))
}

fn pair_form(u: &Vector, v: &Vector) -> FieldElement {
    form_eval(u, v).expect("same ambient space")
}

/// Assembles the ten columns from five `(x_i, y_i)` pairs.
fn cols_from_pairs(pairs: [(Vector, Vector); 5]) -> Vec<Vector> {
    let mut cols = Vec::with_capacity(10);
    for (x, y) in pairs {
        cols.push(x);
        cols.push(y);
    }
    cols
}

/// Builds the expected catalog presentation for a raw label.
fn expect_pres(
    alg: &Algebra,
    label: &FamilyLabel,
) -> Result<crate::algebra::Presentation, CanonError> {
    Ok(crate::families::instantiate(alg.field(), label)?)
}

// ---------------------------------------------------------------------------
// Isotropic centre of dimension five.

pub(crate) fn normalize_center5<'a>(
    alg: &'a Algebra,
    flags: &Flags,
) -> Result<(FamilyLabel, Normalizer<'a>), CanonError> {
    let field = alg.field();
    let one = FieldElement::one(field);
    // the centre is Lagrangian: park it on the x side and complete
    let partial: Vec<(usize, Vector)> = flags
        .z
        .basis()
        .iter()
        .enumerate()
        .map(|(i, v)| (x_slot(i + 1), v.clone()))
        .collect();
    let ext = extend_standard_basis(field, 5, &partial)?;
    let cols: Vec<Vector> = (0..10).map(|j| ext.col(j)).collect();
    let mut n = Normalizer::new(alg, cols)?;
    n.note("centre spans x1..x5");

    // locate a nonzero (y_i y_j, y_k) and move it to (1,2,3)
    let mut found = None;
    'search: for i in 1..=5usize {
        for j in (i + 1)..=5 {
            for k in (j + 1)..=5 {
                if !n.t(y_slot(i), y_slot(j), y_slot(k)).is_zero() {
                    found = Some((i, j, k));
                    break 'search;
                }
            }
        }
    }
    let (i, j, k) = found.ok_or_else(|| internal("all y-triples vanish but the centre has dimension five"))?;
    if i != 1 {
        n.swap_pairs(1, i);
    }
    if j != 2 {
        n.swap_pairs(2, j);
    }
    if k != 3 {
        n.swap_pairs(3, k);
    }
    let c = n.t(y_slot(1), y_slot(2), y_slot(3));
    n.scale_pair(1, &c.inv()?)?;

    // clear (y_i y_j, y_4) and (y_i y_j, y_5) for i < j <= 3 by shifting y4,
    // y5 along the complementary y among y1, y2, y3
    for target in [4usize, 5] {
        for (i, j, comp) in [(1usize, 2usize, 3usize), (1, 3, 2), (2, 3, 1)] {
            let val = n.t(y_slot(i), y_slot(j), y_slot(target));
            if val.is_zero() {
                continue;
            }
            let denom = n.t(y_slot(i), y_slot(j), y_slot(comp));
            let coeff = val.div(&denom)?.neg();
            n.y_add_y(target, comp, &coeff);
        }
    }

    // one of (y_i y_4, y_5), i <= 3, must be nonzero; bring it to i = 1
    let i = (1..=3)
        .find(|&i| !n.t(y_slot(i), y_slot(4), y_slot(5)).is_zero())
        .ok_or_else(|| internal("y4 acts trivially, contradicting the centre dimension"))?;
    if i != 1 {
        n.swap_pairs(1, i);
        let c = n.t(y_slot(1), y_slot(2), y_slot(3));
        n.scale_pair(1, &c.inv()?)?;
    }
    let c = n.t(y_slot(1), y_slot(4), y_slot(5));
    n.scale_pair(4, &c.inv()?)?;

    // the two remaining values retract onto y1
    let alpha = n.t(y_slot(2), y_slot(4), y_slot(5));
    n.y_add_y(2, 1, &alpha.neg());
    let beta = n.t(y_slot(3), y_slot(4), y_slot(5));
    n.y_add_y(3, 1, &beta.neg());

    let label = FamilyLabel::plain(FamilyTag::P51);
    n.expect_presentation(&expect_pres(alg, &label)?)?;
    let _ = one;
    Ok((label, n))
}

// ---------------------------------------------------------------------------
// Isotropic centre of dimension three, dim L^3 = 5.

pub(crate) fn normalize_dim3_l5<'a>(
    alg: &'a Algebra,
    flags: &Flags,
    report: &StructureReport,
) -> Result<(FamilyLabel, Normalizer<'a>), CanonError> {
    let field = alg.field();
    let zero = FieldElement::zero(field);
    let one = FieldElement::one(field);
    let minus_one = one.neg();
    let l2 = flags.l(2);
    let l3 = flags.l(3);
    let l4 = flags.l(4);
    if !l3.is_isotropic() || l4 != &flags.z {
        return Err(internal("flag shape violates the dim L^3 = 5 analysis"));
    }
    if flags.l2l2.dim() != 1 {
        return Err(internal("L^2 L^2 should be a line"));
    }
    let v = flags.l2l2.perp();
    let v2 = alg.subspace_product(&v, &v);
    let case = report
        .v2_case
        .ok_or_else(|| internal("missing V^2 case in the report"))?;

    match case {
        VSquareCase::InsideL4 => {
            // adapted basis: y1, y2 spanning L^2 mod L^3 with y1 y2 != 0
            let y1 = l2
                .basis()
                .iter()
                .find(|u| l2.basis().iter().any(|w| !alg.multiply(u, w).is_zero()))
                .cloned()
                .ok_or_else(|| internal("L^2 L^2 = 0 in a case that forbids it"))?;
            let v0 = l2
                .basis()
                .iter()
                .find(|w| !alg.multiply(&y1, w).is_zero())
                .cloned()
                .unwrap();
            let zvec = l3
                .basis()
                .iter()
                .find(|z| !pair_form(&y1, z).is_zero())
                .cloned()
                .ok_or_else(|| internal("y1 pairs trivially with L^3"))?;
            let y2 = v0.sub(&zvec.scale(&pair_form(&y1, &v0).div(&pair_form(&y1, &zvec))?));
            let x5 = alg.multiply(&y1, &y2);
            if x5.is_zero() || !flags.l2l2.contains(&x5) {
                return Err(internal("y1 y2 does not span L^2 L^2"));
            }
            let x1 = solve_in(
                l3,
                &[(y1.clone(), one.clone()), (y2.clone(), zero.clone())],
                None,
                "x1",
            )?;
            let x2 = solve_in(
                l3,
                &[(y1.clone(), zero.clone()), (y2.clone(), one.clone())],
                None,
                "x2",
            )?;
            let y5 = solve_in(
                &flags.full,
                &[
                    (x5.clone(), minus_one.clone()),
                    (y1.clone(), zero.clone()),
                    (y2.clone(), zero.clone()),
                    (x1.clone(), zero.clone()),
                    (x2.clone(), zero.clone()),
                ],
                None,
                "y5",
            )?;
            let x4 = alg.multiply(&x2, &y5).neg();
            let x3 = alg.multiply(&x1, &y5).neg();
            let z_span = Subspace::span(field, 10, &[x3.clone(), x4.clone(), x5.clone()]);
            if z_span != flags.z {
                return Err(internal("x3, x4, x5 fail to span the centre"));
            }
            let partial = vec![
                (x_slot(1), x1),
                (x_slot(2), x2),
                (x_slot(3), x3),
                (x_slot(4), x4),
                (x_slot(5), x5),
                (y_slot(1), y1),
                (y_slot(2), y2),
                (y_slot(5), y5),
            ];
            let ext = extend_standard_basis(field, 5, &partial)?;
            let cols: Vec<Vector> = (0..10).map(|j| ext.col(j)).collect();
            let mut n = Normalizer::new(alg, cols)?;
            n.note("flag-adapted basis for the V^2 <= L^4 case");

            let alpha = n.t(y_slot(2), y_slot(3), y_slot(5));
            n.y_add_y(3, 1, &alpha);
            let gamma = n.t(y_slot(1), y_slot(3), y_slot(5));
            n.y_add_y(3, 2, &gamma.neg());
            let delta = n.t(y_slot(1), y_slot(4), y_slot(5));
            n.y_add_y(4, 2, &delta.neg());
            let beta = n.t(y_slot(2), y_slot(4), y_slot(5));
            n.y_add_y(4, 1, &beta);
            let r = n.t(y_slot(3), y_slot(4), y_slot(5));
            n.y_add_x(3, 2, &r.neg());

            let label = FamilyLabel::plain(FamilyTag::P31);
            n.expect_presentation(&expect_pres(alg, &label)?)?;
            Ok((label, n))
        }
        VSquareCase::InsideL3Only => {
            let v2l4 = v2.sum(l4);
            let w = alg.centralizer(&v2, &v);
            if w.dim() != v.dim() - 1 {
                return Err(internal("the centraliser of V^2 in V is not a hyperplane"));
            }
            let y1_space = v2.perp().intersect(l2);
            let y1 = rep_outside(&y1_space, l3, "y1")?;
            let y2 = solve_in(
                l2,
                &[(y1.clone(), zero.clone())],
                Some(&l3.sum(&Subspace::span(field, 10, std::slice::from_ref(&y1)))),
                "y2",
            )?;
            let x5 = alg.multiply(&y1, &y2);
            if x5.is_zero() {
                return Err(internal("y1 y2 vanishes"));
            }
            let mut lower_span = l3.sum(&Subspace::span(field, 10, &[y1.clone(), y2.clone()]));
            let y3 = solve_in(
                &w,
                &[(y1.clone(), zero.clone()), (y2.clone(), zero.clone())],
                Some(&lower_span),
                "y3",
            )?;
            lower_span = lower_span.sum(&Subspace::span(field, 10, std::slice::from_ref(&y3)));
            let y4 = solve_in(
                &v,
                &[
                    (y1.clone(), zero.clone()),
                    (y2.clone(), zero.clone()),
                    (y3.clone(), zero.clone()),
                ],
                Some(&w),
                "y4",
            )?;
            let _ = lower_span;
            let y5 = solve_in(
                &flags.full,
                &[
                    (x5.clone(), minus_one.clone()),
                    (y1.clone(), zero.clone()),
                    (y2.clone(), zero.clone()),
                    (y3.clone(), zero.clone()),
                    (y4.clone(), zero.clone()),
                ],
                None,
                "y5",
            )?;
            let all_y = |except: usize| -> Vec<(Vector, FieldElement)> {
                [&y1, &y2, &y3, &y4, &y5]
                    .iter()
                    .enumerate()
                    .map(|(idx, yv)| {
                        let target = if idx + 1 == except { one.clone() } else { zero.clone() };
                        ((*yv).clone(), target)
                    })
                    .collect()
            };
            let x4 = solve_in(&w.perp(), &all_y(4), None, "x4")?;
            let x3 = solve_in(&flags.z, &all_y(3), None, "x3")?;
            let x2 = solve_in(&v2l4, &all_y(2), None, "x2")?;
            let x1 = solve_in(l3, &all_y(1), None, "x1")?;
            let cols = cols_from_pairs([
                (x1, y1),
                (x2, y2),
                (x3, y3),
                (x4, y4),
                (x5, y5),
            ]);
            let mut n = Normalizer::new(alg, cols)?;
            n.note("flag-adapted basis for the V^2 <= L^3 case");

            let c = n.t(x_slot(2), y_slot(4), y_slot(5));
            if c.is_zero() {
                return Err(internal("x2 y4 pairs trivially with y5"));
            }
            n.scale_pair(4, &c.inv()?)?;
            let alpha = n.t(x_slot(1), y_slot(4), y_slot(5));
            n.x_add_x(1, 2, &alpha.neg());
            let c = n.t(x_slot(1), y_slot(3), y_slot(5));
            if c.is_zero() {
                return Err(internal("x1 y3 pairs trivially with y5"));
            }
            n.scale_pair(3, &c.inv()?)?;
            let a = n.t(y_slot(1), y_slot(3), y_slot(5));
            n.y_add_x(1, 1, &a.neg());
            let a = n.t(y_slot(1), y_slot(4), y_slot(5));
            n.y_add_y(4, 2, &a.neg());
            let r7 = n.t(y_slot(2), y_slot(3), y_slot(4));
            if r7.is_zero() {
                return Err(internal("(y2 y3, y4) vanishes in the V^2 <= L^3 case"));
            }
            let alpha7 = n.t(y_slot(3), y_slot(4), y_slot(5));
            n.y_add_y(5, 2, &alpha7.div(&r7)?.neg());
            let a8 = n.t(y_slot(2), y_slot(3), y_slot(5));
            n.y_add_y(5, 4, &a8.div(&r7)?.neg());
            let b8 = n.t(y_slot(2), y_slot(4), y_slot(5));
            n.y_add_y(5, 3, &b8.div(&r7)?);
            let r = n.t(y_slot(2), y_slot(3), y_slot(4));
            n.scale_pair(1, &r)?;
            n.scale_pair(2, &r.inv()?)?;
            n.scale_pair(3, &r)?;
            n.scale_pair(4, &r.inv()?)?;

            let label = FamilyLabel::plain(FamilyTag::P32);
            n.expect_presentation(&expect_pres(alg, &label)?)?;
            Ok((label, n))
        }
        VSquareCase::OutsideL3 => {
            let x_space = v2.perp().intersect(l3);
            let w = alg.centralizer(&x_space, &v);
            if w.dim() != v.dim() - 1 {
                return Err(internal("the centraliser in V is not a hyperplane"));
            }
            let y1_space = v2.sum(l4);
            let y1 = rep_outside(&y1_space, l4, "y1")?;
            let y2 = solve_in(
                l2,
                &[(y1.clone(), zero.clone())],
                Some(&l3.sum(&Subspace::span(field, 10, std::slice::from_ref(&y1)))),
                "y2",
            )?;
            let x5 = alg.multiply(&y1, &y2);
            if x5.is_zero() {
                return Err(internal("y1 y2 vanishes"));
            }
            let span12 = l3.sum(&Subspace::span(field, 10, &[y1.clone(), y2.clone()]));
            let y3 = solve_in(
                &w,
                &[(y1.clone(), zero.clone()), (y2.clone(), zero.clone())],
                Some(&span12),
                "y3",
            )?;
            let y4 = solve_in(
                &v,
                &[
                    (y1.clone(), zero.clone()),
                    (y2.clone(), zero.clone()),
                    (y3.clone(), zero.clone()),
                ],
                Some(&w),
                "y4",
            )?;
            let y5 = solve_in(
                &flags.full,
                &[
                    (x5.clone(), minus_one.clone()),
                    (y1.clone(), zero.clone()),
                    (y2.clone(), zero.clone()),
                    (y3.clone(), zero.clone()),
                    (y4.clone(), zero.clone()),
                ],
                None,
                "y5",
            )?;
            let all_y = |except: usize| -> Vec<(Vector, FieldElement)> {
                [&y1, &y2, &y3, &y4, &y5]
                    .iter()
                    .enumerate()
                    .map(|(idx, yv)| {
                        let target = if idx + 1 == except { one.clone() } else { zero.clone() };
                        ((*yv).clone(), target)
                    })
                    .collect()
            };
            let x4 = solve_in(&w.perp(), &all_y(4), None, "x4")?;
            let x3 = solve_in(&flags.z, &all_y(3), None, "x3")?;
            let x2 = solve_in(&x_space, &all_y(2), None, "x2")?;
            let x1 = solve_in(l3, &all_y(1), None, "x1")?;
            let cols = cols_from_pairs([
                (x1, y1),
                (x2, y2),
                (x3, y3),
                (x4, y4),
                (x5, y5),
            ]);
            let mut n = Normalizer::new(alg, cols)?;
            n.note("flag-adapted basis for the V^2 outside L^3 case");

            let c = n.t(x_slot(2), y_slot(4), y_slot(5));
            if c.is_zero() {
                return Err(internal("x2 y4 pairs trivially with y5"));
            }
            n.scale_pair(4, &c.inv()?)?;
            let a = n.t(y_slot(1), y_slot(4), y_slot(5));
            n.y_add_y(4, 2, &a.neg());
            let a = n.t(y_slot(1), y_slot(3), y_slot(5));
            n.y_add_y(3, 2, &a.neg());
            let r = n.t(x_slot(1), y_slot(3), y_slot(4));
            if r.is_zero() {
                return Err(internal("(x1 y3, y4) vanishes in the V^2 outside L^3 case"));
            }
            let a = n.t(x_slot(1), y_slot(3), y_slot(5));
            n.y_add_y(5, 4, &a.div(&r)?.neg());
            let b = n.t(x_slot(1), y_slot(4), y_slot(5));
            n.y_add_y(5, 3, &b.div(&r)?);
            let c2 = n.t(x_slot(1), y_slot(3), y_slot(4));
            n.scale_pair(3, &c2.inv()?)?;
            let a = n.t(y_slot(2), y_slot(3), y_slot(5));
            n.y_add_y(3, 1, &a);
            let b = n.t(y_slot(2), y_slot(4), y_slot(5));
            n.y_add_y(4, 1, &b);
            // straggler values that the flag structure does not force to
            // zero are removed against x2
            let g = n.t(y_slot(3), y_slot(4), y_slot(5));
            n.y_add_x(3, 2, &g.neg());

            let label = FamilyLabel::plain(FamilyTag::P33);
            n.expect_presentation(&expect_pres(alg, &label)?)?;
            Ok((label, n))
        }
    }
}

// ---------------------------------------------------------------------------
// Isotropic centre of dimension three, dim L^3 = 6.

pub(crate) fn normalize_dim3_l6<'a>(
    alg: &'a Algebra,
    flags: &Flags,
    report: &StructureReport,
) -> Result<(FamilyLabel, Normalizer<'a>), CanonError> {
    if flags.l(4).dim() != 4 || flags.l(5).dim() != 2 {
        return Err(internal("dim L^4, L^5 must be 4, 2 when dim L^3 = 6"));
    }
    match report.l3l2_eq_l5 {
        Some(false) => normalize_u_cases(alg, flags, report),
        Some(true) => normalize_tau_cases(alg, flags),
        None => Err(internal("missing L^3 L^2 data in the report")),
    }
}

/// The two families with `L^3 L^2 != L^5`, separated by `dim U Z_4`.
fn normalize_u_cases<'a>(
    alg: &'a Algebra,
    flags: &Flags,
    report: &StructureReport,
) -> Result<(FamilyLabel, Normalizer<'a>), CanonError> {
    let field = alg.field();
    let zero = FieldElement::zero(field);
    let one = FieldElement::one(field);
    let l2 = flags.l(2);
    let l3 = flags.l(3);
    let l4 = flags.l(4);
    let l5 = flags.l(5);
    let z4 = flags.zk(4);
    let u_dim = report
        .u_z4_dim
        .ok_or_else(|| internal("missing U Z_4 data in the report"))?;

    let l3l2 = alg.subspace_product(l3, l2);
    let cap = l3l2.intersect(l5);
    if cap.dim() != 1 {
        return Err(internal("L^3 L^2 ∩ L^5 should be a line"));
    }
    let u_space = alg.multiplier_space(l3, l2, &cap);
    if u_space.dim() != 5 {
        return Err(internal("U should have dimension five"));
    }

    let y2 = rep_outside(l2, l3, "y2")?;
    let mut x1 = rep_outside(&u_space, l4, "x1")?;
    let x5 = alg.multiply(&x1, &y2);
    if x5.is_zero() || !cap.contains(&x5) {
        return Err(internal("x1 y2 does not span L^3 L^2 ∩ L^5"));
    }
    let mut y1 = solve_in(l3, &[(x1.clone(), one.neg())], None, "y1")?;

    // y3: inside the centraliser of U for the one-dimensional case, a free
    // completion of Z_4 otherwise; adding anything from L^4 keeps both, so
    // (y2, y3) = 0 can be arranged up front
    let span_y2 = l3.sum(&Subspace::span(field, 10, std::slice::from_ref(&y2)));
    let mut y3 = if u_dim == 1 {
        let v_space = alg.centralizer(&u_space, z4);
        solve_in(
            &v_space,
            &[(y2.clone(), zero.clone())],
            Some(l3),
            "y3",
        )?
    } else {
        solve_in(z4, &[(y2.clone(), zero.clone())], Some(&span_y2), "y3")?
    };
    let c = alg.triple(&y1, &y2, &y3);
    if c.is_zero() {
        return Err(internal("(y1 y2, y3) vanishes"));
    }
    y3 = y3.scale(&c.inv()?);
    let x3 = alg.multiply(&y1, &y2);
    let x2 = alg.multiply(&y1, &y3).neg();
    let x4 = if u_dim == 1 {
        rep_outside(l5, &Subspace::span(field, 10, std::slice::from_ref(&x5)), "x4")?
    } else {
        let x4 = alg.multiply(&x1, &y3);
        if x4.is_zero() || Subspace::span(field, 10, &[x4.clone(), x5.clone()]).dim() != 2 {
            return Err(internal("x1 y3 should complete L^5"));
        }
        x4
    };

    // pairing fixes; the corrections live in L^4 and the centre, so they do
    // not disturb the products established above
    x1 = x1.sub(&x2.scale(&pair_form(&x1, &y2)));
    x1 = x1.sub(&x3.scale(&pair_form(&x1, &y3)));
    y1 = y1.sub(&x2.scale(&pair_form(&y1, &y2)));
    y1 = y1.sub(&x3.scale(&pair_form(&y1, &y3)));

    let partial = vec![
        (x_slot(1), x1),
        (y_slot(1), y1),
        (x_slot(2), x2),
        (y_slot(2), y2),
        (x_slot(3), x3),
        (y_slot(3), y3),
        (x_slot(4), x4),
        (x_slot(5), x5),
    ];
    let ext = extend_standard_basis(field, 5, &partial)?;
    let cols: Vec<Vector> = (0..10).map(|j| ext.col(j)).collect();
    let mut n = Normalizer::new(alg, cols)?;
    n.note(format!("flag-adapted basis, dim U Z_4 = {u_dim}"));

    // the established products
    let expect_x1y2 = n.col(x_slot(5)).clone();
    if n.prod(x_slot(1), y_slot(2)) != expect_x1y2 {
        return Err(internal("x1 y2 drifted away from x5"));
    }
    if &n.prod(y_slot(1), y_slot(2)) != n.col(x_slot(3)) {
        return Err(internal("y1 y2 drifted away from x3"));
    }
    if n.prod(y_slot(1), y_slot(3)) != n.col(x_slot(2)).neg() {
        return Err(internal("y1 y3 drifted away from -x2"));
    }
    let x1y3 = n.prod(x_slot(1), y_slot(3));
    let x1y3_ok = if u_dim == 1 {
        x1y3.is_zero()
    } else {
        &x1y3 == n.col(x_slot(4))
    };
    if !x1y3_ok {
        return Err(internal("x1 y3 has the wrong value"));
    }

    kill_six_values(&mut n, KillMoves::UCase)?;
    let p = n.t(x_slot(2), y_slot(4), y_slot(5));
    if u_dim == 1 {
        n.scale_pair(4, &p.inv()?)?;
    } else {
        n.scale_pair(2, &p)?;
        n.scale_pair(3, &p.inv()?)?;
        n.scale_pair(4, &p)?;
        n.scale_pair(5, &p.inv()?)?;
    }

    let label = FamilyLabel::plain(if u_dim == 1 { FamilyTag::P34 } else { FamilyTag::P35 });
    n.expect_presentation(&expect_pres(alg, &label)?)?;
    Ok((label, n))
}

enum KillMoves {
    /// `L^3 L^2 != L^5`: the (y2 y3, ·) values retract onto y4 and y5.
    UCase,
    /// `L^3 L^2 = L^5`: they retract onto y3 itself.
    TauCase,
}

/// Clears the six free values `(x1 y4, y5)`, `(y1 y4, y5)`, `(y2 y3, y4)`,
/// `(y2 y3, y5)`, `(y2 y4, y5)`, `(y3 y4, y5)` against the pivot
/// `(x2 y4, y5)`, in an order in which no kill resurrects an earlier one.
fn kill_six_values(n: &mut Normalizer<'_>, moves: KillMoves) -> Result<(), CanonError> {
    let p = n.t(x_slot(2), y_slot(4), y_slot(5));
    if p.is_zero() {
        return Err(internal("the pivot value (x2 y4, y5) vanishes"));
    }
    let killed = |n: &Normalizer<'_>, a: usize, b: usize, c: usize| -> Result<(), CanonError> {
        if n.t(a, b, c).is_zero() {
            Ok(())
        } else {
            Err(internal("a kill step left its target value nonzero"))
        }
    };
    let a = n.t(x_slot(1), y_slot(4), y_slot(5));
    n.x_add_x(1, 2, &a.div(&p)?.neg());
    killed(n, x_slot(1), y_slot(4), y_slot(5))?;
    let b = n.t(y_slot(1), y_slot(4), y_slot(5));
    n.y_add_x(1, 2, &b.div(&p)?.neg());
    killed(n, y_slot(1), y_slot(4), y_slot(5))?;
    match moves {
        KillMoves::UCase => {
            let c = n.t(y_slot(2), y_slot(3), y_slot(4));
            n.y_add_y(4, 1, &c.neg());
            let d = n.t(y_slot(2), y_slot(3), y_slot(5));
            n.y_add_y(5, 1, &d.neg());
        }
        KillMoves::TauCase => {
            let c = n.t(y_slot(2), y_slot(3), y_slot(4));
            n.y_add_x(3, 1, &c);
            let d = n.t(y_slot(2), y_slot(3), y_slot(5));
            n.y_add_y(3, 1, &d);
        }
    }
    killed(n, y_slot(2), y_slot(3), y_slot(4))?;
    killed(n, y_slot(2), y_slot(3), y_slot(5))?;
    let e = n.t(y_slot(2), y_slot(4), y_slot(5));
    n.y_add_x(2, 2, &e.div(&p)?.neg());
    killed(n, y_slot(2), y_slot(4), y_slot(5))?;
    let f = n.t(y_slot(3), y_slot(4), y_slot(5));
    n.y_add_x(3, 2, &f.div(&p)?.neg());
    killed(n, y_slot(3), y_slot(4), y_slot(5))?;
    Ok(())
}

/// The four families with `L^3 L^2 = L^5`, separated by the type of `tau`.
fn normalize_tau_cases<'a>(
    alg: &'a Algebra,
    flags: &Flags,
) -> Result<(FamilyLabel, Normalizer<'a>), CanonError> {
    let field = alg.field();
    let zero = FieldElement::zero(field);
    let one = FieldElement::one(field);
    let l4 = flags.l(4);
    let l5 = flags.l(5);

    let mut frame = TauFrame::new(alg, flags)?;
    let tau = frame.tau(alg)?;
    let (a, b) = min_poly_2x2(&tau)
        .ok_or_else(|| internal("tau is scalar, which the case analysis excludes"))?;
    let tau_type = classify_tau_type(field, &a, &b)?;

    // choose x4, x5 in L^5 and the lifts x1, y1 according to the type
    let (tag, x4, x5, mut x1, mut y1) = match tau_type {
        TauType::Split => {
            let roots = quadratic_roots(field, &a, &b)?;
            let (lam, mu) = (roots[0].clone(), roots[1].clone());
            // shift the smaller root to zero, scale the other to one
            frame.y3 = frame.y3.sub(&frame.y2.scale(&lam));
            frame.y3 = frame.y3.scale(&mu.sub(&lam).inv()?);
            let tau = frame.tau(alg)?;
            let eigen = |val: &FieldElement| -> Result<Vector, CanonError> {
                let mut m = tau.clone();
                m.set(0, 0, m.get(0, 0).sub(val));
                m.set(1, 1, m.get(1, 1).sub(val));
                let k = m.kernel();
                let t = k
                    .first()
                    .ok_or_else(|| internal("missing eigenvector"))?;
                Ok(frame.u[0]
                    .scale(t.coord(0))
                    .add(&frame.u[1].scale(t.coord(1))))
            };
            let x4 = eigen(&zero)?;
            let mut x5 = eigen(&one)?;
            let x1 = frame.phi_inv(alg, &x4)?;
            let mut y1 = frame.phi_inv(alg, &x5)?;
            let sigma = pair_form(&x1, &y1);
            if sigma.is_zero() {
                return Err(internal("the lifted pair is degenerate"));
            }
            let sinv = sigma.inv()?;
            x5 = x5.scale(&sinv);
            y1 = y1.scale(&sinv);
            (FamilyTag::P36, x4, x5, x1, y1)
        }
        TauType::Double => {
            let roots = quadratic_roots(field, &a, &b)?;
            frame.y3 = frame.y3.sub(&frame.y2.scale(&roots[0]));
            let x5 = l5
                .basis()
                .iter()
                .find(|w| !frame.apply_tau(alg, w).map(|t| t.is_zero()).unwrap_or(true))
                .cloned()
                .ok_or_else(|| internal("tau vanished after the shift"))?;
            let x4 = frame.apply_tau(alg, &x5)?;
            let x1 = frame.phi_inv(alg, &x4)?;
            let y1 = frame.phi_inv(alg, &x5)?;
            let sigma = pair_form(&x1, &y1);
            if sigma.is_zero() {
                return Err(internal("the lifted pair is degenerate"));
            }
            // rescaling y3 rescales tau, keeping x4 = tau x5 intact
            frame.y3 = frame.y3.scale(&sigma);
            let x5 = x5.scale(&sigma.inv()?);
            let y1 = y1.scale(&sigma.inv()?);
            (FamilyTag::P37, x4, x5, x1, y1)
        }
        TauType::IrreducibleSquare => {
            // remove the linear term (characteristic != 2 here over finite
            // fields), leaving t^2 - s
            if field.characteristic() != 2 {
                let half = FieldElement::from_int(field, 2).inv()?;
                frame.y3 = frame.y3.add(&frame.y2.scale(&a.mul(&half)));
            } else if !a.is_zero() {
                return Err(internal("irreducible-square type with a linear term"));
            }
            let x5 = l5.basis()[0].clone();
            let x4 = frame.apply_tau(alg, &x5)?;
            let x1 = frame.phi_inv(alg, &x4)?;
            let y1 = frame.phi_inv(alg, &x5)?;
            let sigma = pair_form(&x1, &y1);
            if sigma.is_zero() {
                return Err(internal("the lifted pair is degenerate"));
            }
            frame.y3 = frame.y3.scale(&sigma);
            let x5 = x5.scale(&sigma.inv()?);
            let y1 = y1.scale(&sigma.inv()?);
            (FamilyTag::P38, x4, x5, x1, y1)
        }
        TauType::IrreducibleGeneral => {
            let x5 = l5.basis()[0].clone();
            let x4 = frame.apply_tau(alg, &x5)?;
            let x1 = frame.phi_inv(alg, &x4)?;
            let y1 = frame.phi_inv(alg, &x5)?;
            let sigma = pair_form(&x1, &y1);
            if sigma.is_zero() {
                return Err(internal("the lifted pair is degenerate"));
            }
            // rescaling y3 rescales tau and with it x4 and x1
            frame.y3 = frame.y3.scale(&sigma.inv()?);
            let x4 = x4.scale(&sigma.inv()?);
            let x1 = x1.scale(&sigma.inv()?);
            (FamilyTag::P39, x4, x5, x1, y1)
        }
    };

    let y2 = frame.y2.clone();
    let y3 = frame.y3.clone();
    let x2 = solve_in(
        l4,
        &[
            (y1.clone(), zero.clone()),
            (y2.clone(), one.clone()),
            (y3.clone(), zero.clone()),
        ],
        None,
        "x2",
    )?;
    let x3 = solve_in(
        &flags.z,
        &[
            (y1.clone(), zero.clone()),
            (y2.clone(), zero.clone()),
            (y3.clone(), one.clone()),
        ],
        None,
        "x3",
    )?;
    x1 = x1.sub(&x2.scale(&pair_form(&x1, &y2)));
    x1 = x1.sub(&x3.scale(&pair_form(&x1, &y3)));
    y1 = y1.sub(&x2.scale(&pair_form(&y1, &y2)));
    y1 = y1.sub(&x3.scale(&pair_form(&y1, &y3)));

    let partial = vec![
        (x_slot(1), x1),
        (y_slot(1), y1),
        (x_slot(2), x2),
        (y_slot(2), y2),
        (x_slot(3), x3),
        (y_slot(3), y3),
        (x_slot(4), x4),
        (x_slot(5), x5),
    ];
    let ext = extend_standard_basis(field, 5, &partial)?;
    let cols: Vec<Vector> = (0..10).map(|j| ext.col(j)).collect();
    let mut n = Normalizer::new(alg, cols)?;
    n.note(format!("tau type {}", tau_type.name()));

    // the core products of the four shapes
    let check = |n: &Normalizer<'_>, a: usize, b: usize, expect: &Vector| -> Result<(), CanonError> {
        if &n.prod(a, b) != expect {
            return Err(internal("a core product drifted during completion"));
        }
        Ok(())
    };
    check(&n, x_slot(1), y_slot(2), n.col(x_slot(4)))?;
    check(&n, y_slot(1), y_slot(2), n.col(x_slot(5)))?;
    match tag {
        FamilyTag::P36 => {
            check(&n, x_slot(1), y_slot(3), &Vector::zero(field, 10))?;
            check(&n, y_slot(1), y_slot(3), n.col(x_slot(5)))?;
        }
        FamilyTag::P37 => {
            check(&n, x_slot(1), y_slot(3), &Vector::zero(field, 10))?;
            check(&n, y_slot(1), y_slot(3), n.col(x_slot(4)))?;
        }
        FamilyTag::P38 => {
            let s = n.t(x_slot(1), y_slot(3), y_slot(5));
            check(&n, x_slot(1), y_slot(3), &n.col(x_slot(5)).scale(&s))?;
            check(&n, y_slot(1), y_slot(3), n.col(x_slot(4)))?;
        }
        FamilyTag::P39 => {
            let r = n.t(x_slot(1), y_slot(3), y_slot(4));
            let s = n.t(x_slot(1), y_slot(3), y_slot(5));
            let expect = n.col(x_slot(4)).scale(&r).add(&n.col(x_slot(5)).scale(&s));
            check(&n, x_slot(1), y_slot(3), &expect)?;
            check(&n, y_slot(1), y_slot(3), n.col(x_slot(4)))?;
        }
        _ => unreachable!(),
    }

    kill_six_values(&mut n, KillMoves::TauCase)?;

    let params = match tag {
        FamilyTag::P36 | FamilyTag::P37 => vec![n.t(x_slot(2), y_slot(4), y_slot(5))],
        FamilyTag::P38 => vec![
            n.t(x_slot(2), y_slot(4), y_slot(5)),
            n.t(x_slot(1), y_slot(3), y_slot(5)),
        ],
        FamilyTag::P39 => vec![
            n.t(x_slot(2), y_slot(4), y_slot(5)),
            n.t(x_slot(1), y_slot(3), y_slot(4)),
            n.t(x_slot(1), y_slot(3), y_slot(5)),
        ],
        _ => unreachable!(),
    };
    let label = FamilyLabel::with_params(tag, params);
    n.expect_presentation(&expect_pres(alg, &label)?)?;
    Ok((label, n))
}

// ---------------------------------------------------------------------------
// Non-isotropic centre: split off hyperbolic central pairs.

pub(crate) fn classify_nonisotropic(
    alg: &Algebra,
    flags: &Flags,
    report: StructureReport,
) -> Result<Classification, CanonError> {
    let field = alg.field();
    let mut complement = flags.full.clone();
    let mut split_pairs: Vec<(Vector, Vector)> = Vec::new();
    loop {
        let zc = alg.centralizer(&complement, &complement);
        match hyperbolic_pair_in(&zc) {
            None => break,
            Some((u, v)) => {
                let span = Subspace::span(field, 10, &[u.clone(), v.clone()]);
                complement = complement.intersect(&span.perp());
                split_pairs.push((u, v));
            }
        }
    }
    if complement.is_zero() {
        // the algebra is abelian, which the catalog does not cover
        return Ok(Classification::Unsupported {
            center_dim: report.center_dim,
            report,
        });
    }
    let zc = alg.centralizer(&complement, &complement);
    let (label, norm) = match (complement.dim(), zc.dim(), split_pairs.len()) {
        (6, 3, 2) => normalize_q71(alg, &complement, &zc, &split_pairs)?,
        (8, 3, 1) => normalize_q51(alg, &complement, &zc, &split_pairs)?,
        (8, 2, 1) => normalize_q41(alg, &complement, &zc, &split_pairs)?,
        (d, zd, k) => {
            return Err(internal(format!(
                "unexpected reduction state: complement dim {d}, centre dim {zd}, {k} pairs"
            )))
        }
    };
    finish(alg, label, norm)
}

/// Dimension-six core: the product form on `L/Z` lands in `Z = L^2`.
fn normalize_q71<'a>(
    alg: &'a Algebra,
    complement: &Subspace,
    zc: &Subspace,
    split_pairs: &[(Vector, Vector)],
) -> Result<(FamilyLabel, Normalizer<'a>), CanonError> {
    let field = alg.field();
    let zero = FieldElement::zero(field);
    let minus_one = FieldElement::one(field).neg();
    let l2c = alg.subspace_product(complement, complement);
    if &l2c != zc || !zc.is_isotropic() {
        return Err(internal("dimension-six core is not of product type"));
    }
    let y1 = complement
        .basis()
        .iter()
        .find(|u| complement.basis().iter().any(|w| !alg.multiply(u, w).is_zero()))
        .cloned()
        .ok_or_else(|| internal("core is abelian"))?;
    let w0 = complement
        .basis()
        .iter()
        .find(|w| !alg.multiply(&y1, w).is_zero())
        .cloned()
        .unwrap();
    let zvec = zc
        .basis()
        .iter()
        .find(|z| !pair_form(&y1, z).is_zero())
        .cloned()
        .ok_or_else(|| internal("y1 pairs trivially with the centre"))?;
    let y2 = w0.sub(&zvec.scale(&pair_form(&y1, &w0).div(&pair_form(&y1, &zvec))?));
    let x3 = alg.multiply(&y1, &y2);
    if x3.is_zero() {
        return Err(internal("y1 y2 vanishes in the core"));
    }
    let y3 = solve_in(
        complement,
        &[
            (x3.clone(), minus_one),
            (y1.clone(), zero.clone()),
            (y2.clone(), zero.clone()),
        ],
        None,
        "y3",
    )?;
    let x1 = alg.multiply(&y2, &y3);
    let x2 = alg.multiply(&y1, &y3).neg();
    let cols = cols_from_pairs([
        (x1, y1),
        (x2, y2),
        (x3, y3),
        split_pairs[1].clone(),
        split_pairs[0].clone(),
    ]);
    let n = Normalizer::new(alg, cols)?;
    let label = FamilyLabel::plain(FamilyTag::Q71);
    n.expect_presentation(&expect_pres(alg, &label)?)?;
    Ok((label, n))
}

/// Dimension-eight core with centre of dimension three.
fn normalize_q51<'a>(
    alg: &'a Algebra,
    complement: &Subspace,
    zc: &Subspace,
    split_pairs: &[(Vector, Vector)],
) -> Result<(FamilyLabel, Normalizer<'a>), CanonError> {
    let field = alg.field();
    let zero = FieldElement::zero(field);
    let one = FieldElement::one(field);
    let minus_one = one.neg();
    let l2c = alg.subspace_product(complement, complement);
    if l2c.dim() != 5 || !zc.is_isotropic() {
        return Err(internal("unexpected core shape for centre dimension three"));
    }
    let (x1, y1) = hyperbolic_pair_in(&l2c)
        .ok_or_else(|| internal("the form degenerates on the core square"))?;
    let x1_span = Subspace::span(field, 10, std::slice::from_ref(&x1));
    let y1_span = Subspace::span(field, 10, std::slice::from_ref(&y1));
    let k_x1 = alg.centralizer(&x1_span, complement);
    let k_y1 = alg.centralizer(&y1_span, complement);
    let mut y2 = rep_outside(&k_x1, &l2c, "y2")?;
    y2 = y2.sub(&y1.scale(&pair_form(&x1, &y2)));
    y2 = y2.add(&x1.scale(&pair_form(&y1, &y2)));
    let x3 = alg.multiply(&y1, &y2);
    if x3.is_zero() || !zc.contains(&x3) {
        return Err(internal("y1 y2 should land in the core centre"));
    }
    let y3 = solve_in(
        complement,
        &[
            (x3.clone(), minus_one.clone()),
            (x1.clone(), zero.clone()),
            (y1.clone(), zero.clone()),
            (y2.clone(), zero.clone()),
        ],
        None,
        "y3",
    )?;
    let x4 = alg.multiply(&x1, &y3);
    let x2 = alg.multiply(&y1, &y3).neg();
    if Subspace::span(field, 10, &[x2.clone(), x3.clone(), x4.clone()]) != *zc {
        return Err(internal("core centre basis failed to materialise"));
    }
    let y4 = solve_in(
        &k_y1,
        &[
            (x4.clone(), minus_one),
            (x1.clone(), zero.clone()),
            (y1.clone(), zero.clone()),
            (y2.clone(), zero.clone()),
            (y3.clone(), zero.clone()),
            (x2.clone(), zero.clone()),
            (x3.clone(), zero.clone()),
        ],
        None,
        "y4",
    )?;
    let cols = cols_from_pairs([
        (x1, y1),
        (x2, y2),
        (x3, y3),
        (x4, y4),
        split_pairs[0].clone(),
    ]);
    let mut n = Normalizer::new(alg, cols)?;
    let u = n.t(y_slot(2), y_slot(3), y_slot(4));
    n.y_add_y(4, 1, &u.neg());
    let label = FamilyLabel::plain(FamilyTag::Q51);
    n.expect_presentation(&expect_pres(alg, &label)?)?;
    Ok((label, n))
}

/// Dimension-eight core with centre of dimension two: the one-parameter
/// family.
fn normalize_q41<'a>(
    alg: &'a Algebra,
    complement: &Subspace,
    zc: &Subspace,
    split_pairs: &[(Vector, Vector)],
) -> Result<(FamilyLabel, Normalizer<'a>), CanonError> {
    let field = alg.field();
    let zero = FieldElement::zero(field);
    let one = FieldElement::one(field);
    let minus_one = one.neg();
    let l2c = alg.subspace_product(complement, complement);
    let l3c = alg.subspace_product(&l2c, complement);
    let l4c = alg.subspace_product(&l3c, complement);
    let l5c = alg.subspace_product(&l4c, complement);
    if l2c.dim() != 6 || l3c.dim() != 5 || l4c.dim() != 3 || &l5c != zc {
        return Err(internal("core series does not match the one-parameter family"));
    }
    let y2 = rep_outside(&l2c, &l3c, "y2")?;
    let x2 = solve_in(&l4c, &[(y2.clone(), one)], None, "x2")?;
    let mut x1 = rep_outside(&l3c, &l4c, "x1")?;
    x1 = x1.sub(&x2.scale(&pair_form(&x1, &y2)));
    let y1 = solve_in(
        &l3c,
        &[(x1.clone(), minus_one.clone()), (y2.clone(), zero.clone())],
        None,
        "y1",
    )?;
    let x4 = alg.multiply(&x1, &y2);
    let x3 = alg.multiply(&y1, &y2);
    if Subspace::span(field, 10, &[x3.clone(), x4.clone()]) != *zc {
        return Err(internal("x1 y2, y1 y2 should span the core centre"));
    }
    let x2_span = Subspace::span(field, 10, std::slice::from_ref(&x2));
    let s3 = alg.multiplier_space(
        complement,
        &x2_span,
        &Subspace::span(field, 10, std::slice::from_ref(&x4)),
    );
    let y3 = solve_in(
        &s3,
        &[
            (x3.clone(), minus_one.clone()),
            (x4.clone(), zero.clone()),
            (x1.clone(), zero.clone()),
            (y1.clone(), zero.clone()),
            (y2.clone(), zero.clone()),
            (x2.clone(), zero.clone()),
        ],
        None,
        "y3",
    )?;
    let s4 = alg.multiplier_space(
        complement,
        &x2_span,
        &Subspace::span(field, 10, std::slice::from_ref(&x3)),
    );
    let y4 = solve_in(
        &s4,
        &[
            (x4.clone(), minus_one),
            (x3.clone(), zero.clone()),
            (x1.clone(), zero.clone()),
            (y1.clone(), zero.clone()),
            (y2.clone(), zero.clone()),
            (x2.clone(), zero.clone()),
            (y3.clone(), zero.clone()),
        ],
        None,
        "y4",
    )?;
    let cols = cols_from_pairs([
        (x1, y1),
        (x2, y2),
        (x3, y3),
        (x4, y4),
        split_pairs[0].clone(),
    ]);
    let mut n = Normalizer::new(alg, cols)?;
    let rho = n.t(x_slot(2), y_slot(3), y_slot(4));
    if rho.is_zero() {
        return Err(internal("the family parameter vanished"));
    }
    let u3 = n.t(x_slot(1), y_slot(3), y_slot(4));
    n.x_add_x(1, 2, &u3.div(&rho)?.neg());
    let u1 = n.t(y_slot(1), y_slot(3), y_slot(4));
    n.y_add_x(1, 2, &u1.div(&rho)?.neg());
    let u2 = n.t(y_slot(2), y_slot(3), y_slot(4));
    n.y_add_x(2, 2, &u2.div(&rho)?.neg());
    let rho = n.t(x_slot(2), y_slot(3), y_slot(4));
    let label = FamilyLabel::with_params(FamilyTag::Q41, vec![rho]);
    n.expect_presentation(&expect_pres(alg, &label)?)?;
    Ok((label, n))
}
