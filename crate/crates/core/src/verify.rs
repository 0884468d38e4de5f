//! Independent checks: reduced cohomology of facet unions, divisor cohomology
//! on the toric variety, common-root coefficient systems and the feasibility
//! tests for dimensions four and up.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bracket::CoefficientSystem;
use crate::error::{Error, Result};
use crate::geometry::{for_each_combination, FacetSelection, LatticePoint, LatticePolytope};
use crate::linalg::{Rational, SparseMatrix, SparseVec};

/// Cellular chain complex of `|D_J|` for a 3-polytope: vertices, edges and the
/// facets of `J`. Edges run from the lower to the higher vertex index; a
/// facet is oriented by walking its boundary cycle.
#[derive(Clone, Debug)]
pub struct FacetComplex {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    pub facets: Vec<usize>,
    /// `d1`: edges to vertices, `d2`: facets to edges.
    pub d1: SparseMatrix,
    pub d2: SparseMatrix,
}

impl FacetComplex {
    pub fn new(q: &LatticePolytope, j: &FacetSelection) -> Result<FacetComplex> {
        if q.dim() != 3 {
            return Err(Error::DimensionInconsistent {
                expected: 3,
                found: q.dim(),
            });
        }
        let facets: Vec<usize> = j.indices().to_vec();
        let all_edges: Vec<(usize, usize)> = q.faces(1).iter().map(|e| (e.vertices[0], e.vertices[1])).collect();
        let mut edge_set = BTreeSet::new();
        let mut vertex_set = BTreeSet::new();
        let mut cycles = Vec::new();
        for &f in &facets {
            let verts = q.facet_vertices(f);
            let mine: Vec<(usize, usize)> = all_edges
                .iter()
                .copied()
                .filter(|(a, b)| verts.contains(a) && verts.contains(b))
                .collect();
            edge_set.extend(mine.iter().copied());
            vertex_set.extend(verts.iter().copied());
            cycles.push(boundary_cycle(&mine));
        }
        let vertices: Vec<usize> = vertex_set.into_iter().collect();
        let edges: Vec<(usize, usize)> = edge_set.into_iter().collect();
        let vpos: HashMap<usize, usize> = vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let epos: HashMap<(usize, usize), usize> = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();

        let one = Rational::one;
        let d1_cols: Vec<SparseVec> = edges
            .iter()
            .map(|(a, b)| SparseVec::from_entries([(vpos[b], one()), (vpos[a], -one())]))
            .collect();
        let d2_cols: Vec<SparseVec> = cycles
            .iter()
            .map(|cycle| {
                SparseVec::from_entries((0..cycle.len()).map(|i| {
                    let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
                    if a < b {
                        (epos[&(a, b)], one())
                    } else {
                        (epos[&(b, a)], -one())
                    }
                }))
            })
            .collect();
        Ok(FacetComplex {
            d1: SparseMatrix::from_columns(vertices.len(), &d1_cols),
            d2: SparseMatrix::from_columns(edges.len(), &d2_cols),
            vertices,
            edges,
            facets,
        })
    }

    pub fn boundary_squares_to_zero(&self) -> bool {
        self.d1.mul(&self.d2).is_zero()
    }

    /// Reduced Betti numbers `(b~0, b~1, b~2)`.
    pub fn reduced_betti(&self) -> [usize; 3] {
        if self.vertices.is_empty() {
            return [0, 0, 0];
        }
        let r1 = self.d1.rank();
        let r2 = self.d2.rank();
        [
            self.vertices.len() - r1 - 1,
            self.edges.len() - r1 - r2,
            self.facets.len() - r2,
        ]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.facets.len() as i64
    }
}

/// Vertex cycle of a polygon given by its edges.
fn boundary_cycle(edges: &[(usize, usize)]) -> Vec<usize> {
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(a, b) in edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let start = edges.iter().map(|e| e.0.min(e.1)).min().expect("polygon has edges");
    let mut cycle = vec![start];
    let mut prev = start;
    let mut cur = *adj[&start].iter().min().expect("vertex has neighbours");
    while cur != start {
        cycle.push(cur);
        let next = *adj[&cur].iter().find(|&&x| x != prev).expect("polygon is a cycle");
        prev = cur;
        cur = next;
    }
    cycle
}

/// Reduced rational cohomology of `|D_J|` in degrees `-1..=n-1`, computed from
/// the nerve of the facets in `J` (subsets sharing a vertex). Entry 0 is
/// `H~^-1`, which is 1 exactly when `J` is empty.
pub fn reduced_cohomology_from_minus1(q: &LatticePolytope, j: &[usize]) -> Vec<usize> {
    let n = q.dim();
    let mut out = vec![0; n + 1];
    if j.is_empty() {
        out[0] = 1;
        return out;
    }
    // maximal candidate simplices: J-facets through each vertex
    let mut tops: BTreeSet<Vec<usize>> = BTreeSet::new();
    for v in 0..q.vertices().len() {
        let through: Vec<usize> = j.iter().copied().filter(|&f| q.facet_vertices(f).contains(&v)).collect();
        if !through.is_empty() {
            tops.insert(through);
        }
    }
    let mut simplices: Vec<BTreeSet<Vec<usize>>> = Vec::new();
    for top in &tops {
        for size in 1..=top.len() {
            if simplices.len() < size {
                simplices.resize_with(size, BTreeSet::new);
            }
            for_each_combination(top.len(), size, |c| {
                simplices[size - 1].insert(c.iter().map(|&i| top[i]).collect());
            });
        }
    }
    let levels: Vec<Vec<Vec<usize>>> = simplices.into_iter().map(|s| s.into_iter().collect()).collect();
    // ranks of the boundary maps from level d (d+1 vertices) to level d-1;
    // level -1 is the empty simplex
    let mut ranks = vec![0usize; levels.len() + 1];
    ranks[0] = 1;
    for d in 1..levels.len() {
        let index: HashMap<&Vec<usize>, usize> = levels[d - 1].iter().enumerate().map(|(i, s)| (s, i)).collect();
        let cols: Vec<SparseVec> = levels[d]
            .iter()
            .map(|s| {
                SparseVec::from_entries((0..s.len()).map(|i| {
                    let mut face = s.clone();
                    face.remove(i);
                    let sign = if i % 2 == 0 { Rational::one() } else { -Rational::one() };
                    (index[&face], sign)
                }))
            })
            .collect();
        ranks[d] = SparseMatrix::from_columns(levels[d - 1].len(), &cols).rank();
    }
    for (d, level) in levels.iter().enumerate() {
        let b = level.len() - ranks[d] - ranks[d + 1];
        if d < n {
            out[d + 1] = b;
        } else {
            assert_eq!(b, 0, "nerve homology above the sphere dimension");
        }
    }
    out
}

/// `dim H~^i(|D_J|)` for `i = 0..n-1`.
pub fn reduced_cohomology(q: &LatticePolytope, j: &FacetSelection) -> Vec<usize> {
    reduced_cohomology_from_minus1(q, j.indices())[1..].to_vec()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyEntry {
    pub k: i64,
    /// `dim H^i(O(k D_Q - D_I))` for `i = 0..=n`.
    pub dims: Vec<usize>,
    pub radius: i64,
    pub stabilized: bool,
}

impl CohomologyEntry {
    pub fn middle_vanishes(&self) -> bool {
        let n = self.dims.len() - 1;
        self.dims[1..n].iter().all(|&d| d == 0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyProfile {
    pub selection: Vec<usize>,
    pub entries: Vec<CohomologyEntry>,
}

pub fn default_radius(q: &LatticePolytope, k: i64) -> i64 {
    let a = q.facets().iter().map(|f| f.offset.abs()).max().unwrap_or(0);
    k.abs() * a + 2
}

/// Cohomology of `O(k D_Q - D_I)` summed over the characters `u` in the box
/// `[-R, R]^n`; each character contributes `H~^{i-1}` of the union of facets
/// where `k a_j - [j in I] + <u, eta_j>` is negative.
pub fn divisor_cohomology(q: &LatticePolytope, sel: &FacetSelection, k: i64, radius: i64) -> Result<CohomologyEntry> {
    let n = q.dim();
    let mut dims = vec![0usize; n + 1];
    let mut cache: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut on_shell = false;
    let mut u = vec![-radius; n];
    loop {
        let mut mask = 0u64;
        for (j, f) in q.facets().iter().enumerate() {
            let p = f.slack(&u, k) - i64::from(sel.contains(j));
            if p < 0 {
                mask |= 1 << j;
            }
        }
        let betti = cache.entry(mask).or_insert_with(|| {
            let idx: Vec<usize> = (0..q.num_facets()).filter(|j| mask >> j & 1 == 1).collect();
            reduced_cohomology_from_minus1(q, &idx)
        });
        if betti.iter().any(|&b| b > 0) {
            for (i, b) in betti.iter().enumerate() {
                dims[i] += b;
            }
            if u.iter().any(|c| c.abs() == radius) {
                on_shell = true;
            }
        }
        // odometer
        let mut c = n;
        loop {
            if c == 0 {
                if on_shell {
                    return Err(Error::NotStabilized { radius });
                }
                return Ok(CohomologyEntry {
                    k,
                    dims,
                    radius,
                    stabilized: true,
                });
            }
            c -= 1;
            if u[c] < radius {
                u[c] += 1;
                break;
            }
            u[c] = -radius;
        }
    }
}

/// Start from the default radius and double it up to `attempts` times.
pub fn divisor_cohomology_auto(q: &LatticePolytope, sel: &FacetSelection, k: i64, attempts: usize) -> Result<CohomologyEntry> {
    let mut r = default_radius(q, k);
    let mut last = Error::NotStabilized { radius: r };
    for _ in 0..attempts.max(1) {
        match divisor_cohomology(q, sel, k, r) {
            Err(e @ Error::NotStabilized { .. }) => last = e,
            other => return other,
        }
        r *= 2;
    }
    Err(last)
}

pub fn cohomology_profile(q: &LatticePolytope, sel: &FacetSelection, ks: impl IntoIterator<Item = i64>, radius: Option<i64>) -> Result<CohomologyProfile> {
    let entries = ks
        .into_iter()
        .map(|k| match radius {
            Some(r) => divisor_cohomology(q, sel, k, r),
            None => divisor_cohomology_auto(q, sel, k, 4),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CohomologyProfile {
        selection: sel.indices().to_vec(),
        entries,
    })
}

/// `x^alpha` for a Laurent exponent vector.
pub fn monomial_value(x: &[Rational], alpha: &[i64]) -> Rational {
    let mut v = Rational::one();
    for (xi, &e) in x.iter().zip(alpha) {
        let base = if e < 0 { xi.recip() } else { xi.clone() };
        for _ in 0..e.unsigned_abs() {
            v *= &base;
        }
    }
    v
}

/// `sum_i C_{k,i} x^{alpha_i}` for each of the four rows.
pub fn evaluate_system(points: &[LatticePoint], c: &CoefficientSystem, x: &[Rational]) -> Vec<Rational> {
    c.rows
        .iter()
        .map(|row| row.iter().zip(points).map(|(ci, p)| ci * monomial_value(x, &p.0)).sum())
        .collect()
}

/// Random integer coefficients with one entry per row solved so that all
/// four polynomials vanish at `x0`.
pub fn common_root_system(points: &[LatticePoint], x0: &[Rational], seed: u64) -> Result<CoefficientSystem> {
    if x0.iter().any(|x| x.is_zero()) {
        return Err(Error::Shape("root must lie in the torus".into()));
    }
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<Rational> = points.iter().map(|p| monomial_value(x0, &p.0)).collect();
    let rows = (0..4)
        .map(|_| {
            let mut row: Vec<Rational> = (0..points.len())
                .map(|_| Rational::from_integer(BigInt::from(rng.gen_range(-20..=20))))
                .collect();
            let solved = rng.gen_range(0..points.len());
            let rest: Rational = (0..points.len()).filter(|&i| i != solved).map(|i| &row[i] * &values[i]).sum();
            row[solved] = -rest / &values[solved];
            row
        })
        .collect();
    CoefficientSystem::new(rows)
}

/// A Laurent root with small nonzero rational coordinates.
pub fn random_torus_point<R: Rng>(dim: usize, rng: &mut R) -> Vec<Rational> {
    (0..dim)
        .map(|_| {
            let mut p = 0;
            while p == 0 {
                p = rng.gen_range(-4..=4);
            }
            Rational::new(BigInt::from(p), BigInt::from(rng.gen_range(1..=3)))
        })
        .collect()
}

/// Four-dimensional test: feasible iff some facet `D_i` has `l(Q - D_bar_i)`
/// empty. Returns the first witness facet.
pub fn feasibility_dim4(q: &LatticePolytope) -> Result<(bool, Option<usize>)> {
    if q.dim() != 4 {
        return Err(Error::DimensionInconsistent {
            expected: 4,
            found: q.dim(),
        });
    }
    for i in 0..q.num_facets() {
        let comp = FacetSelection::new(q, &[i])?.complement();
        if q.points_off_facets(1, &comp).is_empty() {
            return Ok((true, Some(i)));
        }
    }
    Ok((false, None))
}

fn dilations(n: usize) -> (i64, i64) {
    let m = n as i64 + 1;
    (m / 2 - 2, (m + 1) / 2 - 2)
}

/// Lattice-point conditions of the test in dimension `n >= 5`, without the
/// topological precondition.
pub fn high_dim_conditions(q: &LatticePolytope, sel: &FacetSelection) -> bool {
    let (k1, k2) = dilations(q.dim());
    q.points_off_facets(k1, sel).is_empty() && q.points_off_facets(k2, &sel.complement()).is_empty()
}

/// Test for `n >= 5`. The union of the selected facets must have vanishing
/// reduced cohomology; this is checked, the manifold condition is not.
pub fn feasibility_high_dim(q: &LatticePolytope, sel: &FacetSelection) -> Result<bool> {
    if q.dim() < 5 {
        return Err(Error::DimensionInconsistent {
            expected: 5,
            found: q.dim(),
        });
    }
    if sel.is_empty() || sel.len() == q.num_facets() {
        return Err(Error::InvalidSelection("selection must be proper and nonempty".into()));
    }
    if reduced_cohomology(q, sel).iter().any(|&b| b > 0) {
        return Err(Error::InvalidSelection("facet union has reduced cohomology".into()));
    }
    Ok(high_dim_conditions(q, sel))
}

/// First proper selection (by size, then lexicographically) with acyclic
/// facet union that passes the lattice-point conditions.
pub fn find_feasible_selection(q: &LatticePolytope) -> Result<Option<FacetSelection>> {
    let s = q.num_facets();
    for size in 1..s {
        let mut found = None;
        for_each_combination(s, size, |c| {
            if found.is_some() {
                return;
            }
            let sel = FacetSelection::new(q, c).expect("valid indices");
            if high_dim_conditions(q, &sel) && reduced_cohomology(q, &sel).iter().all(|&b| b == 0) {
                found = Some(sel);
            }
        });
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fixtures;

    fn cube() -> LatticePolytope {
        LatticePolytope::from_points(&fixtures::unit_cube()).unwrap()
    }

    fn select(q: &LatticePolytope, pred: impl Fn(&[i64], i64) -> bool) -> FacetSelection {
        let idx: Vec<usize> = (0..q.num_facets())
            .filter(|&i| pred(&q.facets()[i].normal, q.facets()[i].offset))
            .collect();
        FacetSelection::new(q, &idx).unwrap()
    }

    #[test]
    fn cellular_and_nerve_agree() {
        let q = cube();
        for mask in 1u64..(1 << 6) {
            let idx: Vec<usize> = (0..6).filter(|i| mask >> i & 1 == 1).collect();
            let j = FacetSelection::new(&q, &idx).unwrap();
            let cx = FacetComplex::new(&q, &j).unwrap();
            assert!(cx.boundary_squares_to_zero());
            assert_eq!(cx.reduced_betti().to_vec(), reduced_cohomology(&q, &j));
            let b = cx.reduced_betti();
            assert_eq!(b[0] as i64 - b[1] as i64 + b[2] as i64, cx.euler_characteristic() - 1);
        }
    }

    #[test]
    fn cube_examples() {
        let q = cube();
        let strip = select(&q, |n, a| n[0] != 0 || (n[1] == 1 && a == 0));
        assert_eq!(reduced_cohomology(&q, &strip), vec![0, 0, 0]);
        let tb = select(&q, |n, _| n[2] != 0);
        assert_eq!(reduced_cohomology(&q, &tb), vec![1, 0, 0]);
        let all = select(&q, |_, _| true);
        assert_eq!(reduced_cohomology(&q, &all), vec![0, 0, 1]);
    }

    #[test]
    fn cohomology_of_strip() {
        let q = cube();
        let strip = select(&q, |n, a| n[0] != 0 || (n[1] == 1 && a == 0));
        for k in -2..=2 {
            let e = divisor_cohomology_auto(&q, &strip, k, 3).unwrap();
            assert!(e.middle_vanishes(), "k = {k}: {:?}", e.dims);
            if k >= 0 {
                assert_eq!(e.dims[0], q.points_off_facets(k, &strip).len());
            } else {
                assert_eq!(e.dims[3], q.points_off_facets(-k, &strip.complement()).len());
            }
        }
    }

    #[test]
    fn top_bottom_has_h1() {
        let q = cube();
        let tb = select(&q, |n, _| n[2] != 0);
        let e = divisor_cohomology_auto(&q, &tb, 0, 3).unwrap();
        assert_eq!(e.dims, vec![0, 1, 0, 0]);
    }

    #[test]
    fn small_box_is_reported() {
        let q = cube();
        let strip = select(&q, |n, a| n[0] != 0 || (n[1] == 1 && a == 0));
        assert!(matches!(divisor_cohomology(&q, &strip, 3, 1), Err(Error::NotStabilized { radius: 1 })));
    }

    #[test]
    fn common_root_rows_vanish() {
        let pts = fixtures::unit_cube();
        let one = vec![Rational::one(); 3];
        let c = common_root_system(&pts, &one, 4).unwrap();
        for row in &c.rows {
            assert!(row.iter().sum::<Rational>().is_zero());
        }
        let x: Vec<Rational> = [1, 2, 3].iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect();
        let pts = fixtures::octahedron();
        let c = common_root_system(&pts, &x, 9).unwrap();
        assert!(evaluate_system(&pts, &c, &x).iter().all(|v| v.is_zero()));
        assert_eq!(common_root_system(&pts, &x, 9).unwrap(), c);
    }

    #[test]
    fn dim4_simplices() {
        for d in 1..=5 {
            let q = LatticePolytope::from_points(&fixtures::dilated_simplex(4, d)).unwrap();
            assert_eq!(feasibility_dim4(&q).unwrap().0, d <= 3, "d = {d}");
        }
    }

    #[test]
    fn high_dim_simplices() {
        let q = LatticePolytope::from_points(&fixtures::dilated_simplex(5, 2)).unwrap();
        let one = FacetSelection::new(&q, &[0]).unwrap();
        assert!(!feasibility_high_dim(&q, &one).unwrap());
        let three = FacetSelection::new(&q, &[0, 1, 2]).unwrap();
        assert!(feasibility_high_dim(&q, &three).unwrap());
        assert!(find_feasible_selection(&q).unwrap().is_some());

        let q = LatticePolytope::from_points(&fixtures::dilated_simplex(5, 3)).unwrap();
        assert!(find_feasible_selection(&q).unwrap().is_none());
    }
}
