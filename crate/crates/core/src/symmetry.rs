//! Local relabelings of inputs and outputs, their action on tables and on
//! reduced-space inequalities, and orbit-based inequality classes.
//!
//! An element `g` acts on tables by
//! `(g·p)(ab|ij) = p(σ_{π(i)}(a) τ_{ρ(j)}(b) | π(i) ρ(j))`, where `π`, `ρ`
//! permute inputs and `σ_x`, `τ_y` permute outputs at the (source) input
//! `x`, `y`. Reduced coordinates transform affinely, so the action on an
//! inequality is computed by lifting to the full table, acting there and
//! projecting back.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::coords::{lift_raw, project_raw, Space};
use crate::error::{Error, Result};
use crate::inequality::{LinearEquation, LinearInequality};
use crate::polyhedra::AffineConstraints;
use crate::table::{CorrelationTable, Scenario};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalSymmetry {
    /// Permutation of Alice's inputs.
    pub pi_a: Vec<usize>,
    /// Permutation of Bob's inputs.
    pub pi_b: Vec<usize>,
    /// Output permutation for each of Alice's inputs.
    pub pi_a_out: Vec<Vec<usize>>,
    /// Output permutation for each of Bob's inputs.
    pub pi_b_out: Vec<Vec<usize>>,
}

fn identity_perm(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (x, &y) in p.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

fn is_perm(p: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    p.len() == n && p.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
}

impl LocalSymmetry {
    pub fn identity(sc: &Scenario) -> Self {
        LocalSymmetry {
            pi_a: identity_perm(sc.ma),
            pi_b: identity_perm(sc.mb),
            pi_a_out: vec![identity_perm(sc.ka); sc.ma],
            pi_b_out: vec![identity_perm(sc.kb); sc.mb],
        }
    }

    pub fn is_valid_for(&self, sc: &Scenario) -> bool {
        is_perm(&self.pi_a, sc.ma)
            && is_perm(&self.pi_b, sc.mb)
            && self.pi_a_out.len() == sc.ma
            && self.pi_b_out.len() == sc.mb
            && self.pi_a_out.iter().all(|p| is_perm(p, sc.ka))
            && self.pi_b_out.iter().all(|p| is_perm(p, sc.kb))
    }

    /// The element acting as `self` after `other`:
    /// `act(g.then(h)) = act(h) ∘ act(g)`... expressed the other way round,
    /// `act_on_table(&g.compose(&h), t) == act_on_table(&g, &act_on_table(&h, t))`.
    pub fn compose(&self, other: &LocalSymmetry) -> LocalSymmetry {
        fn side(
            gp: &[usize],
            gout: &[Vec<usize>],
            hp: &[usize],
            hout: &[Vec<usize>],
        ) -> (Vec<usize>, Vec<Vec<usize>>) {
            let perm: Vec<usize> = gp.iter().map(|&x| hp[x]).collect();
            let hinv = invert(hp);
            let outs = (0..gp.len())
                .map(|x| gout[hinv[x]].iter().map(|&a| hout[x][a]).collect())
                .collect();
            (perm, outs)
        }
        let (pi_a, pi_a_out) = side(&self.pi_a, &self.pi_a_out, &other.pi_a, &other.pi_a_out);
        let (pi_b, pi_b_out) = side(&self.pi_b, &self.pi_b_out, &other.pi_b, &other.pi_b_out);
        LocalSymmetry {
            pi_a,
            pi_b,
            pi_a_out,
            pi_b_out,
        }
    }

    pub fn inverse(&self) -> LocalSymmetry {
        fn side(p: &[usize], out: &[Vec<usize>]) -> (Vec<usize>, Vec<Vec<usize>>) {
            let inv = invert(p);
            let outs = (0..p.len()).map(|m| invert(&out[p[m]])).collect();
            (inv, outs)
        }
        let (pi_a, pi_a_out) = side(&self.pi_a, &self.pi_a_out);
        let (pi_b, pi_b_out) = side(&self.pi_b, &self.pi_b_out);
        LocalSymmetry {
            pi_a,
            pi_b,
            pi_a_out,
            pi_b_out,
        }
    }

    /// `perm[k]` is the source index of output entry `k`.
    fn entry_sources(&self, sc: &Scenario) -> Vec<usize> {
        let mut src = vec![0; sc.len()];
        for (a, b, i, j) in sc.cells() {
            let (si, sj) = (self.pi_a[i], self.pi_b[j]);
            let (sa, sb) = (self.pi_a_out[si][a], self.pi_b_out[sj][b]);
            src[sc.index(a, b, i, j)] = sc.index(sa, sb, si, sj);
        }
        src
    }

    fn act_raw<T: Clone>(&self, sc: &Scenario, entries: &[T]) -> Vec<T> {
        self.entry_sources(sc)
            .into_iter()
            .map(|k| entries[k].clone())
            .collect()
    }
}

/// All `mA!·mB!·(kA!)^mA·(kB!)^mB` local symmetries, in a fixed order.
pub fn symmetry_group(sc: &Scenario) -> Vec<LocalSymmetry> {
    let perms = |n: usize| -> Vec<Vec<usize>> { (0..n).permutations(n).collect() };
    let per_input = |inputs: usize, outputs: usize| -> Vec<Vec<Vec<usize>>> {
        let p = perms(outputs);
        (0..inputs)
            .map(|_| p.clone())
            .multi_cartesian_product()
            .collect::<Vec<_>>()
            .into_iter()
            .chain(if inputs == 0 { vec![Vec::new()] } else { Vec::new() })
            .collect()
    };
    let (pa, pb) = (perms(sc.ma), perms(sc.mb));
    let (oa, ob) = (per_input(sc.ma, sc.ka), per_input(sc.mb, sc.kb));
    let mut out = Vec::with_capacity(pa.len() * pb.len() * oa.len() * ob.len());
    for a in &pa {
        for b in &pb {
            for ao in &oa {
                for bo in &ob {
                    out.push(LocalSymmetry {
                        pi_a: a.clone(),
                        pi_b: b.clone(),
                        pi_a_out: ao.clone(),
                        pi_b_out: bo.clone(),
                    });
                }
            }
        }
    }
    out
}

pub fn act_on_table(g: &LocalSymmetry, t: &CorrelationTable) -> Result<CorrelationTable> {
    let sc = t.scenario();
    if !g.is_valid_for(&sc) {
        return Err(Error::ScenarioMismatch(format!("symmetry does not fit {sc}")));
    }
    CorrelationTable::from_entries(sc, g.act_raw(&sc, t.entries()))
}

/// Affine map `y ↦ A y + a` on reduced coordinates, stored by rows of `A`.
#[derive(Debug, Clone)]
struct AffineMap {
    rows: Vec<Vec<(usize, i64)>>,
    offset: Vec<i64>,
}

impl AffineMap {
    /// `y ↦ P(g⁻¹ · L(y))`, so that `act(g, q)(P(g·t)) = q(P(t))`.
    fn contragredient(g: &LocalSymmetry, sc: &Scenario, space: Space) -> AffineMap {
        let n = space.dimension(sc);
        let ginv = g.inverse();
        let image = |y: &[i64]| -> Vec<i64> {
            let t = lift_raw(space, sc, y);
            project_raw(space, sc, &ginv.act_raw(sc, &t))
        };
        let offset = image(&vec![0; n]);
        let mut rows = vec![Vec::new(); n];
        for k in 0..n {
            let mut e = vec![0; n];
            e[k] = 1;
            for (r, (v, o)) in image(&e).iter().zip(&offset).enumerate() {
                if v != o {
                    rows[r].push((k, v - o));
                }
            }
        }
        AffineMap { rows, offset }
    }

    fn apply(&self, q: &LinearInequality) -> Result<LinearInequality> {
        let n = q.dimension();
        let mut coeffs = vec![BigInt::zero(); n];
        let mut bound = q.bound().clone();
        for (r, c) in q.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(k, v) in &self.rows[r] {
                coeffs[k] += c * v;
            }
            if self.offset[r] != 0 {
                bound -= c * self.offset[r];
            }
        }
        LinearInequality::new(coeffs, bound)
    }
}

/// Image of `q` under `g` in `space`, in normalized integer form.
pub fn act_on_inequality(
    g: &LocalSymmetry,
    q: &LinearInequality,
    sc: &Scenario,
    space: Space,
) -> Result<LinearInequality> {
    sc.require_binary()?;
    if !g.is_valid_for(sc) {
        return Err(Error::ScenarioMismatch(format!("symmetry does not fit {sc}")));
    }
    check_dim(q, space.dimension(sc))?;
    AffineMap::contragredient(g, sc, space).apply(q)
}

fn check_dim(q: &LinearInequality, n: usize) -> Result<()> {
    if q.dimension() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: q.dimension(),
        });
    }
    Ok(())
}

/// One equivalence class of inequalities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityClass {
    /// Lexicographically least element of the orbit.
    pub representative: LinearInequality,
    /// Indices into the classified list.
    pub members: Vec<usize>,
    /// Whether the class is that of a nonnegativity constraint `p(ab|ij) ≥ 0`.
    pub trivial: bool,
    pub orbit_size: usize,
}

/// The group of a scenario acting on one reduced space, optionally
/// restricted to an affine subspace (for polytopes that are not
/// full-dimensional, inequalities are compared modulo its equations).
pub struct Classifier {
    scenario: Scenario,
    space: Space,
    group: Vec<LocalSymmetry>,
    maps: Vec<AffineMap>,
    constraints: AffineConstraints,
    trivial: BTreeSet<LinearInequality>,
}

impl Classifier {
    pub fn new(scenario: Scenario, space: Space) -> Result<Self> {
        Self::with_equations(scenario, space, &[])
    }

    pub fn with_equations(scenario: Scenario, space: Space, equations: &[LinearEquation]) -> Result<Self> {
        scenario.require_binary()?;
        let n = space.dimension(&scenario);
        let constraints = AffineConstraints::from_equations(n, equations)?;
        let group = symmetry_group(&scenario);
        let maps = group
            .par_iter()
            .map(|g| AffineMap::contragredient(g, &scenario, space))
            .collect();
        let mut c = Classifier {
            scenario,
            space,
            group,
            maps,
            constraints,
            trivial: BTreeSet::new(),
        };
        let positivity = c.positivity_family();
        let trivial = positivity
            .iter()
            .map(|q| c.canonical(q))
            .collect::<Result<BTreeSet<_>>>()?;
        c.trivial = trivial;
        Ok(c)
    }

    pub fn group(&self) -> &[LocalSymmetry] {
        &self.group
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn space(&self) -> Space {
        self.space
    }

    /// Normal form: reduced modulo the equations and gcd-normalized.
    pub fn normalize(&self, q: &LinearInequality) -> Result<LinearInequality> {
        check_dim(q, self.space.dimension(&self.scenario))?;
        self.constraints.reduce(q)
    }

    /// Image of `q` under the `k`-th group element, normalized.
    pub fn act(&self, k: usize, q: &LinearInequality) -> Result<LinearInequality> {
        self.constraints.reduce(&self.maps[k].apply(q)?)
    }

    /// The distinct images of `q`, sorted.
    pub fn orbit(&self, q: &LinearInequality) -> Result<Vec<LinearInequality>> {
        let q = self.normalize(q)?;
        let images: BTreeSet<LinearInequality> =
            (0..self.group.len()).map(|k| self.act(k, &q)).collect::<Result<_>>()?;
        Ok(images.into_iter().collect())
    }

    /// Least orbit element, with the index of a group element mapping `q`
    /// onto it.
    pub fn canonical_with_witness(&self, q: &LinearInequality) -> Result<(LinearInequality, usize)> {
        let q = self.normalize(q)?;
        let mut best: Option<(LinearInequality, usize)> = None;
        for k in 0..self.group.len() {
            let img = self.act(k, &q)?;
            if best.as_ref().is_none_or(|(b, _)| img < *b) {
                best = Some((img, k));
            }
        }
        Ok(best.expect("group is nonempty"))
    }

    pub fn canonical(&self, q: &LinearInequality) -> Result<LinearInequality> {
        Ok(self.canonical_with_witness(q)?.0)
    }

    /// Reduced-space images of every `p(ab|ij) ≥ 0` that is not constant.
    pub fn positivity_family(&self) -> Vec<LinearInequality> {
        let sc = &self.scenario;
        let n = self.space.dimension(sc);
        let base = lift_raw(self.space, sc, &vec![0i64; n]);
        let columns: Vec<Vec<i64>> = (0..n)
            .map(|k| {
                let mut e = vec![0i64; n];
                e[k] = 1;
                lift_raw(self.space, sc, &e)
            })
            .collect();
        let mut out = BTreeSet::new();
        for idx in 0..sc.len() {
            // p = base + Σ_k (col_k − base) y_k ≥ 0  ⇔  −Σ_k (…) y_k ≤ base
            let coeffs: Vec<BigInt> = columns
                .iter()
                .map(|c| BigInt::from(base[idx] - c[idx]))
                .collect();
            if let Ok(q) = LinearInequality::new(coeffs, base[idx].into()) {
                if let Ok(q) = self.constraints.reduce(&q) {
                    out.insert(q);
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn is_trivial(&self, q: &LinearInequality) -> Result<bool> {
        Ok(self.trivial.contains(&self.canonical(q)?))
    }

    /// Groups `ineqs` into orbits. Classes are sorted by representative.
    pub fn partition(&self, ineqs: &[LinearInequality]) -> Result<Vec<InequalityClass>> {
        let normalized: Vec<LinearInequality> =
            ineqs.iter().map(|q| self.normalize(q)).collect::<Result<_>>()?;
        let mut by_form: HashMap<&LinearInequality, Vec<usize>> = HashMap::new();
        for (k, q) in normalized.iter().enumerate() {
            by_form.entry(q).or_default().push(k);
        }
        let mut assigned = vec![false; normalized.len()];
        let mut classes = Vec::new();
        for k in 0..normalized.len() {
            if assigned[k] {
                continue;
            }
            let orbit = self.orbit(&normalized[k])?;
            let mut members = Vec::new();
            for img in &orbit {
                if let Some(idx) = by_form.get(img) {
                    for &m in idx {
                        assigned[m] = true;
                        members.push(m);
                    }
                }
            }
            members.sort_unstable();
            let representative = orbit[0].clone();
            classes.push(InequalityClass {
                trivial: self.trivial.contains(&representative),
                representative,
                members,
                orbit_size: orbit.len(),
            });
        }
        classes.sort_by(|a, b| a.representative.cmp(&b.representative));
        Ok(classes)
    }
}

pub fn canonical_inequality(q: &LinearInequality, sc: &Scenario, space: Space) -> Result<LinearInequality> {
    Classifier::new(*sc, space)?.canonical(q)
}

pub fn partition_into_classes(
    ineqs: &[LinearInequality],
    sc: &Scenario,
    space: Space,
) -> Result<Vec<InequalityClass>> {
    Classifier::new(*sc, space)?.partition(ineqs)
}
