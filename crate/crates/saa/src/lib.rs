//! Exact computation with symplectic alternating algebras.
//!
//! A symplectic alternating algebra is an even-dimensional vector space with
//! a non-degenerate alternating bilinear form `( , )` and an alternating
//! product `u·v` tied together by `(u·v, w) = (v·w, u)`. The crate builds
//! such algebras from sparse triple-value presentations over exact fields,
//! computes their central series and characteristic subspaces, and, in
//! dimension ten, reduces nilpotent algebras with non-isotropic centre or
//! isotropic centre of dimension three or five to canonical presentations
//! drawn from a fixed catalog of thirteen families. Per-field censuses count
//! the resulting isomorphism classes.
//!
//! Module map:
//! - [`gf`]: exact `GF(p^n)` and rational arithmetic, cube classes and the
//!   special subgroups behind parameter equivalence,
//! - [`symlin`]: exact symplectic linear algebra (subspaces, perps, standard
//!   basis completion, random symplectic maps),
//! - [`algebra`]: presentations, product tables, series, the text format,
//! - [`families`]: the catalog, parameter equivalence and censuses,
//! - [`canon`]: structure reports, the classification algorithm, isomorphism
//!   testing,
//! - [`selftest`]: the acceptance suite, also reachable from the CLI.

pub mod algebra;
pub mod canon;
pub mod families;
pub mod gf;
pub mod selftest;
pub mod symlin;
