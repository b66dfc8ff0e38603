//! Vertex-to-facet conversion, affine hulls and LP membership.

mod dd;
mod lp;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::inequality::{LinearEquation, LinearInequality};
use crate::linalg;
use crate::rational::{self, Rational};

/// Convex hull of finitely many points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VRep {
    pub dimension: usize,
    pub points: Vec<Vec<Rational>>,
}

impl VRep {
    pub fn new(dimension: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.len() != dimension) {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                found: p.len(),
            });
        }
        Ok(VRep { dimension, points })
    }

    pub fn from_points(points: Vec<Vec<Rational>>) -> Result<Self> {
        let dimension = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::Precondition("empty point set".into()))?;
        Self::new(dimension, points)
    }

    fn require_nonempty(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::Precondition("empty point set".into()));
        }
        Ok(())
    }
}

/// Facet description: `inequalities` plus the `equations` of the affine
/// hull when the polytope is not full-dimensional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HRep {
    pub dimension: usize,
    pub inequalities: Vec<LinearInequality>,
    pub equations: Vec<LinearEquation>,
}

impl HRep {
    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        for e in &self.equations {
            if !e.holds(x)? {
                return Ok(false);
            }
        }
        for q in &self.inequalities {
            if !q.evaluate(x)?.satisfied {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// An affine subspace `{x : x_p + Σ_f e_pf x_f = h_p}` in reduced row
/// echelon form; `pivots` are the dependent coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineConstraints {
    dimension: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    pivots: Vec<usize>,
}

impl AffineConstraints {
    /// The whole space.
    pub fn none(dimension: usize) -> Self {
        AffineConstraints {
            dimension,
            rows: Vec::new(),
            rhs: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_equations(dimension: usize, equations: &[LinearEquation]) -> Result<Self> {
        let mut aug = Vec::with_capacity(equations.len());
        for e in equations {
            if e.coeffs().len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: e.coeffs().len(),
                });
            }
            let mut row: Vec<Rational> = e.coeffs().iter().cloned().map(Rational::from_integer).collect();
            row.push(Rational::from_integer(e.rhs().clone()));
            aug.push(row);
        }
        let red = linalg::rref(aug, dimension + 1);
        if red.pivots.last() == Some(&dimension) {
            return Err(Error::Precondition("inconsistent equations".into()));
        }
        Ok(AffineConstraints {
            dimension,
            rhs: red.rows.iter().map(|r| r[dimension].clone()).collect(),
            rows: red.rows.into_iter().map(|mut r| {
                r.truncate(dimension);
                r
            }).collect(),
            pivots: red.pivots,
        })
    }

    /// Affine dimension of the subspace.
    pub fn affine_dimension(&self) -> usize {
        self.dimension - self.pivots.len()
    }

    pub fn free_coordinates(&self) -> Vec<usize> {
        (0..self.dimension).filter(|c| !self.pivots.contains(c)).collect()
    }

    pub fn equations(&self) -> Vec<LinearEquation> {
        let mut out: Vec<LinearEquation> = self
            .rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, h)| {
                let mut all = row.clone();
                all.push(h.clone());
                let mut ints = rational::primitive_integer_vector(&all);
                let rhs = ints.pop().expect("nonempty");
                LinearEquation::new(ints, rhs).expect("rref rows are nonzero")
            })
            .collect();
        out.sort();
        out
    }

    /// Rewrites `q` so that it has no weight on dependent coordinates; the
    /// result agrees with `q` on the subspace.
    pub fn reduce(&self, q: &LinearInequality) -> Result<LinearInequality> {
        if self.pivots.is_empty() {
            return Ok(q.clone());
        }
        let mut coeffs: Vec<Rational> = q.coeffs().iter().cloned().map(Rational::from_integer).collect();
        let mut bound = Rational::from_integer(q.bound().clone());
        for ((row, h), &p) in self.rows.iter().zip(&self.rhs).zip(&self.pivots) {
            let f = coeffs[p].clone();
            if f.is_zero() {
                continue;
            }
            for (c, e) in coeffs.iter_mut().zip(row) {
                if !e.is_zero() {
                    *c -= &f * e;
                }
            }
            bound -= &f * h;
        }
        coeffs.push(bound);
        let mut ints = rational::primitive_integer_vector(&coeffs);
        let bound = ints.pop().expect("nonempty");
        LinearInequality::new(ints, bound)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.rows.iter().zip(&self.rhs).all(|(row, h)| {
            let lhs: Rational = row.iter().zip(x).map(|(a, b)| a * b).sum();
            lhs == *h
        })
    }
}

/// Affine hull of the points, as constraints in reduced row echelon form.
pub fn affine_hull(v: &VRep) -> Result<AffineConstraints> {
    v.require_nonempty()?;
    let n = v.dimension;
    let base = &v.points[0];
    let diffs: Vec<Vec<Rational>> = v.points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let normals = linalg::nullspace(&diffs, n);
    let equations: Vec<LinearEquation> = normals
        .iter()
        .map(|c| {
            let mut all = c.clone();
            all.push(c.iter().zip(base).map(|(a, b)| a * b).sum());
            let mut ints = rational::primitive_integer_vector(&all);
            let rhs = ints.pop().expect("nonempty");
            LinearEquation::new(ints, rhs).expect("null vectors are nonzero")
        })
        .collect();
    AffineConstraints::from_equations(n, &equations)
}

/// Dimension of the affine hull of the points.
pub fn affine_dimension(v: &VRep) -> Result<usize> {
    v.require_nonempty()?;
    let base = &v.points[0];
    let diffs: Vec<Vec<Rational>> = v.points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    Ok(linalg::rank(&diffs, v.dimension))
}

/// Converts the vertex description into a minimal facet description.
///
/// Points are inserted in the given order, duplicates dropped after their
/// first occurrence; the order can change the running time by orders of
/// magnitude. Every
/// returned inequality is checked to be tight on an affinely independent
/// point set of the facet's dimension. Output is sorted, so its content does
/// not depend on the order of the input points.
pub fn facets_from_vertices(v: &VRep) -> Result<HRep> {
    let mut seen = std::collections::HashSet::new();
    let points = v.points.iter().filter(|p| seen.insert(*p)).cloned().collect();
    facets_in_order(&VRep { dimension: v.dimension, points })
}

fn facets_in_order(v: &VRep) -> Result<HRep> {
    v.require_nonempty()?;
    let n = v.dimension;
    let points = v.points.clone();

    let hull = affine_hull(&VRep::new(n, points.clone())?)?;
    let dim = hull.affine_dimension();
    let equations = hull.equations();
    if dim == 0 {
        return Ok(HRep {
            dimension: n,
            inequalities: Vec::new(),
            equations,
        });
    }
    let free = hull.free_coordinates();

    // homogenized integer rows (1, x_free) scaled by a positive factor
    let rows: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| {
            let mut h = vec![Rational::from_integer(1.into())];
            h.extend(free.iter().map(|&c| p[c].clone()));
            rational::primitive_integer_vector(&h)
        })
        .collect();

    let rays: Vec<Vec<BigInt>> = match rows
        .iter()
        .map(|r| r.iter().map(<i64 as dd::DdInt>::from_big).collect::<Option<Vec<i64>>>())
        .collect::<Option<Vec<Vec<i64>>>>()
        .and_then(|small| dd::extreme_rays(&small))
    {
        Some(rays) => rays
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect(),
        None => dd::extreme_rays(&rows).expect("big integers do not overflow"),
    };

    let checked: Vec<Result<LinearInequality>> = rays
        .par_iter()
        .map(|h| {
            // h0 + h·x ≥ 0  ⇔  (−h)·x ≤ h0
            let mut coeffs = vec![BigInt::zero(); n];
            for (k, &c) in free.iter().enumerate() {
                coeffs[c] = -h[k + 1].clone();
            }
            let q = LinearInequality::new(coeffs, h[0].clone())?;
            let tight: Vec<Vec<BigInt>> = rows
                .iter()
                .filter(|r| {
                    let s: BigInt = r.iter().zip(h).map(|(a, b)| a * b).sum();
                    assert!(!s.is_negative(), "extreme ray violates an input row");
                    s.is_zero()
                })
                .cloned()
                .collect();
            if linalg::integer_rank(&tight) != dim {
                return Err(Error::Internal(format!("inequality {q} is not facet-defining")));
            }
            Ok(q)
        })
        .collect();
    let mut inequalities = checked.into_iter().collect::<Result<Vec<_>>>()?;
    inequalities.sort();
    inequalities.dedup();
    Ok(HRep {
        dimension: n,
        inequalities,
        equations,
    })
}

/// Outcome of a membership query, with a certificate either way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MembershipResult {
    /// `(point index, weight)` pairs with positive weights summing to one.
    Inside { weights: Vec<(usize, Rational)> },
    /// An inequality valid for every point and violated by the query.
    Outside { separator: LinearInequality },
}

impl MembershipResult {
    pub fn is_inside(&self) -> bool {
        matches!(self, MembershipResult::Inside { .. })
    }

    /// Re-checks the certificate by direct arithmetic.
    pub fn verify(&self, x: &[Rational], v: &VRep) -> bool {
        match self {
            MembershipResult::Inside { weights } => {
                let total: Rational = weights.iter().map(|(_, w)| w.clone()).sum();
                if total != Rational::from_integer(1.into())
                    || weights.iter().any(|(k, w)| *k >= v.points.len() || !w.is_positive())
                {
                    return false;
                }
                (0..v.dimension).all(|c| {
                    let s: Rational = weights.iter().map(|(k, w)| w * &v.points[*k][c]).sum();
                    s == x[c]
                })
            }
            MembershipResult::Outside { separator } => {
                let Ok(e) = separator.evaluate(x) else {
                    return false;
                };
                !e.satisfied
                    && v
                        .points
                        .iter()
                        .all(|p| separator.evaluate(p).is_ok_and(|e| e.satisfied))
            }
        }
    }
}

/// Decides `x ∈ conv(points)` with an exact LP.
pub fn membership(x: &[Rational], v: &VRep) -> Result<MembershipResult> {
    v.require_nonempty()?;
    if x.len() != v.dimension {
        return Err(Error::DimensionMismatch {
            expected: v.dimension,
            found: x.len(),
        });
    }
    let result = match lp::convex_combination(&v.points, x) {
        lp::Feasibility::Feasible(weights) => MembershipResult::Inside { weights },
        lp::Feasibility::Infeasible(z) => {
            // a·p + c ≥ 0 on the hull, a·x + c < 0: separator (−a)·y ≤ c
            let mut ints = rational::primitive_integer_vector(&z);
            let bound = ints.pop().expect("convexity row");
            let coeffs = ints.into_iter().map(|c| -c).collect();
            MembershipResult::Outside {
                separator: LinearInequality::new(coeffs, bound)?,
            }
        }
    };
    if !result.verify(x, v) {
        return Err(Error::Internal("membership certificate failed to verify".into()));
    }
    Ok(result)
}

/// Result of checking every inner point against the outer polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Containment {
    pub contained: bool,
    /// One certificate per inner point, in input order.
    pub witnesses: Vec<MembershipResult>,
}

pub fn contains_polytope(inner: &VRep, outer: &VRep) -> Result<Containment> {
    if inner.dimension != outer.dimension {
        return Err(Error::DimensionMismatch {
            expected: outer.dimension,
            found: inner.dimension,
        });
    }
    let witnesses: Vec<MembershipResult> = inner
        .points
        .par_iter()
        .map(|p| membership(p, outer))
        .collect::<Result<_>>()?;
    Ok(Containment {
        contained: witnesses.iter().all(MembershipResult::is_inside),
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn vrep(pts: &[&[i64]]) -> VRep {
        VRep::from_points(pts.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn unit_square() {
        let h = facets_from_vertices(&vrep(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap();
        assert!(h.equations.is_empty());
        let expected = vec![
            LinearInequality::from_i64(&[-1, 0], 0).unwrap(),
            LinearInequality::from_i64(&[0, -1], 0).unwrap(),
            LinearInequality::from_i64(&[0, 1], 1).unwrap(),
            LinearInequality::from_i64(&[1, 0], 1).unwrap(),
        ];
        let mut expected = expected;
        expected.sort();
        assert_eq!(h.inequalities, expected);
    }

    #[test]
    fn simplex_in_three_space() {
        let h = facets_from_vertices(&vrep(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(h.equations.len(), 1);
        assert_eq!(h.equations[0].coeffs(), &[1.into(), 1.into(), 1.into()]);
        assert_eq!(h.equations[0].rhs(), &BigInt::from(1));
        assert_eq!(h.inequalities.len(), 3);
        assert!(h.contains(&[frac(1, 3), frac(1, 3), frac(1, 3)]).unwrap());
        assert!(!h.contains(&[int(1), int(1), int(-1)]).unwrap());
    }

    #[test]
    fn single_point_and_segment() {
        let p = vrep(&[&[2, 3]]);
        assert_eq!(affine_dimension(&p).unwrap(), 0);
        let h = facets_from_vertices(&p).unwrap();
        assert!(h.inequalities.is_empty());
        assert_eq!(h.equations.len(), 2);
        let seg = vrep(&[&[0, 0], &[2, 2]]);
        let h = facets_from_vertices(&seg).unwrap();
        assert_eq!(h.inequalities.len(), 2);
        assert_eq!(h.equations.len(), 1);
        assert!(h.contains(&[int(1), int(1)]).unwrap());
        assert!(!h.contains(&[int(3), int(3)]).unwrap());
    }

    #[test]
    fn point_order_does_not_matter() {
        let a = vrep(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]);
        let mut rev = a.clone();
        rev.points.reverse();
        assert_eq!(facets_from_vertices(&a).unwrap(), facets_from_vertices(&rev).unwrap());
    }

    #[test]
    fn membership_certificates() {
        let sq = vrep(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let inside = membership(&[frac(1, 3), frac(2, 3)], &sq).unwrap();
        assert!(inside.is_inside());
        let outside = membership(&[frac(3, 2), int(0)], &sq).unwrap();
        assert!(!outside.is_inside());
        assert!(outside.verify(&[frac(3, 2), int(0)], &sq));
        assert!(matches!(
            membership(&[int(0)], &sq),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn containment() {
        let sq = vrep(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let tri = vrep(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert!(contains_polytope(&tri, &sq).unwrap().contained);
        assert!(!contains_polytope(&sq, &tri).unwrap().contained);
        assert!(contains_polytope(&sq, &sq).unwrap().contained);
    }

    #[test]
    fn reduce_modulo_equations() {
        // plane x + y + z = 1; inequality x + y ≤ 1 is z ≥ 0 on the plane
        let eq = LinearEquation::new(vec![1.into(), 1.into(), 1.into()], 1.into()).unwrap();
        let aff = AffineConstraints::from_equations(3, &[eq]).unwrap();
        assert_eq!(aff.free_coordinates(), vec![1, 2]);
        let q = LinearInequality::from_i64(&[1, 1, 0], 1).unwrap();
        let r = aff.reduce(&q).unwrap();
        assert_eq!(r, LinearInequality::from_i64(&[0, 0, -1], 0).unwrap());
    }
}
