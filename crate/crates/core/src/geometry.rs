//! Exact integral convex geometry: hulls with primitive inner facet normals,
//! face lattices, dilated lattice point enumeration and divisor vectors.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{bareiss_determinant, rat, Echelon, Rational, SparseVec};

/// A point of the integer lattice. Ordering is lexicographic on coordinates,
/// which is the canonical order used for every basis downstream.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, other: &[i64]) -> i64 {
        self.0.iter().zip(other).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> LatticePoint {
        LatticePoint(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> LatticePoint {
        self.scale(-1)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint(v)
    }
}

/// Facet inequality `<m, normal> >= -offset` with a primitive inner normal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Facet {
    /// Value of `<m, normal> + k * offset`; zero on the facet of `kQ`, positive inside.
    pub fn slack(&self, m: &[i64], k: i64) -> i64 {
        m.iter().zip(&self.normal).map(|(a, b)| a * b).sum::<i64>() + k * self.offset
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub dim: usize,
    /// Indices into the polytope's vertex list, ascending.
    pub vertices: Vec<usize>,
    /// Facets containing this face, ascending.
    pub facets: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<LatticePoint>,
    facets: Vec<Facet>,
    /// `faces[d]` lists all faces of dimension `d`, for `d < dim`.
    faces: Vec<Vec<Face>>,
}

/// Facet subset `I`, stored ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FacetSelection {
    indices: Vec<usize>,
    num_facets: usize,
}

impl FacetSelection {
    pub fn new(q: &LatticePolytope, indices: &[usize]) -> Result<Self> {
        let s = q.num_facets();
        let set: BTreeSet<usize> = indices.iter().copied().collect();
        if set.len() != indices.len() {
            return Err(Error::InvalidSelection("repeated facet index".into()));
        }
        if let Some(bad) = set.iter().find(|&&i| i >= s) {
            return Err(Error::InvalidSelection(format!("facet index {bad} out of range (0..{s})")));
        }
        Ok(FacetSelection {
            indices: set.into_iter().collect(),
            num_facets: s,
        })
    }

    /// Same as [`FacetSelection::new`] but also requires `I` nonempty and proper.
    pub fn proper(q: &LatticePolytope, indices: &[usize]) -> Result<Self> {
        let sel = Self::new(q, indices)?;
        if sel.indices.is_empty() || sel.indices.len() == sel.num_facets {
            return Err(Error::InvalidSelection("selection must be nonempty and proper".into()));
        }
        Ok(sel)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn complement(&self) -> FacetSelection {
        FacetSelection {
            indices: (0..self.num_facets).filter(|i| !self.contains(*i)).collect(),
            num_facets: self.num_facets,
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn mask(&self) -> u64 {
        self.indices.iter().fold(0u64, |m, i| m | (1u64 << i))
    }
}

/// Divisor `sum c_i D_i`, one coefficient per facet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorVector(pub Vec<i64>);

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, x| g.gcd(x))
}

/// Affine rank of a point set (dimension of its affine hull), `None` if empty.
pub fn affine_rank(points: &[LatticePoint]) -> Option<usize> {
    let base = points.first()?;
    let mut ech = Echelon::new();
    for p in &points[1..] {
        let d = p.sub(base);
        ech.insert(&SparseVec::from_entries(d.0.iter().enumerate().map(|(i, x)| (i, rat(*x)))));
    }
    Some(ech.rank())
}

fn int_det(m: &[Vec<i64>]) -> i64 {
    let big = m.iter().map(|r| r.iter().map(|x| BigInt::from(*x)).collect()).collect();
    bareiss_determinant(big).to_i64().expect("determinant fits in i64")
}

/// Integer normal to the hyperplane through `pts` (n points in dimension n),
/// computed by cofactor expansion; zero if they are affinely dependent.
fn hyperplane_normal(pts: &[&LatticePoint]) -> Vec<i64> {
    let n = pts[0].dim();
    let diffs: Vec<Vec<i64>> = pts[1..].iter().map(|p| p.sub(pts[0]).0).collect();
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = diffs
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| *x).collect())
                .collect();
            let d = if minor.is_empty() { 1 } else { int_det(&minor) };
            if j % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

pub fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

impl LatticePolytope {
    /// Exact convex hull of a full-dimensional lattice point set.
    ///
    /// Candidate hyperplanes are spanned by affinely independent subsets of the
    /// input; those with all points on one side are facets.
    pub fn from_points(points: &[LatticePoint]) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyInput)?;
        let n = first.dim();
        if n == 0 {
            return Err(Error::DegenerateSpan { rank: 0, dim: 0 });
        }
        if let Some(bad) = points.iter().find(|p| p.dim() != n) {
            return Err(Error::DimensionInconsistent {
                expected: n,
                found: bad.dim(),
            });
        }
        let pts: Vec<LatticePoint> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let rank = affine_rank(&pts).unwrap_or(0);
        if rank < n {
            return Err(Error::DegenerateSpan { rank, dim: n });
        }

        let mut facets: BTreeSet<Facet> = BTreeSet::new();
        for_each_combination(pts.len(), n, |combo| {
            let chosen: Vec<&LatticePoint> = combo.iter().map(|&i| &pts[i]).collect();
            let mut normal = hyperplane_normal(&chosen);
            let g = gcd_all(&normal);
            if g == 0 {
                return;
            }
            for x in normal.iter_mut() {
                *x /= g;
            }
            let h = chosen[0].dot(&normal);
            let (mut above, mut below) = (false, false);
            for p in &pts {
                let v = p.dot(&normal) - h;
                above |= v > 0;
                below |= v < 0;
                if above && below {
                    return;
                }
            }
            if below {
                normal.iter_mut().for_each(|x| *x = -*x);
                facets.insert(Facet { normal, offset: h });
            } else {
                facets.insert(Facet { normal, offset: -h });
            }
        });
        let facets: Vec<Facet> = facets.into_iter().collect();

        let vertices: Vec<LatticePoint> = pts
            .iter()
            .filter(|p| {
                let tight: Vec<LatticePoint> = facets
                    .iter()
                    .filter(|f| f.slack(&p.0, 1) == 0)
                    .map(|f| LatticePoint(f.normal.clone()))
                    .collect();
                let mut ech = Echelon::new();
                for t in &tight {
                    ech.insert(&SparseVec::from_entries(t.0.iter().enumerate().map(|(i, x)| (i, rat(*x)))));
                }
                ech.rank() == n
            })
            .cloned()
            .collect();

        let faces = Self::face_lattice(n, &vertices, &facets);
        Ok(LatticePolytope {
            dim: n,
            vertices,
            facets,
            faces,
        })
    }

    fn face_lattice(n: usize, vertices: &[LatticePoint], facets: &[Facet]) -> Vec<Vec<Face>> {
        let incidence: Vec<BTreeSet<usize>> = facets
            .iter()
            .map(|f| (0..vertices.len()).filter(|&v| f.slack(&vertices[v].0, 1) == 0).collect())
            .collect();
        // Faces are exactly the nonempty intersections of facet vertex sets.
        let mut all: BTreeSet<Vec<usize>> = incidence.iter().map(|s| s.iter().copied().collect()).collect();
        let mut frontier: Vec<Vec<usize>> = all.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for a in &frontier {
                for facet in &incidence {
                    let meet: Vec<usize> = a.iter().copied().filter(|v| facet.contains(v)).collect();
                    if !meet.is_empty() && all.insert(meet.clone()) {
                        next.push(meet);
                    }
                }
            }
            frontier = next;
        }
        let mut faces: Vec<Vec<Face>> = vec![Vec::new(); n];
        for vs in all {
            let pts: Vec<LatticePoint> = vs.iter().map(|&v| vertices[v].clone()).collect();
            let dim = affine_rank(&pts).expect("nonempty");
            let on: Vec<usize> = (0..facets.len())
                .filter(|&f| vs.iter().all(|v| incidence[f].contains(v)))
                .collect();
            faces[dim].push(Face {
                dim,
                vertices: vs,
                facets: on,
            });
        }
        faces
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn faces(&self, dim: usize) -> &[Face] {
        &self.faces[dim]
    }

    /// Codimension-two faces (edges of a 3-polytope).
    pub fn ridges(&self) -> &[Face] {
        &self.faces[self.dim - 2]
    }

    /// Vertex indices lying on facet `i`.
    pub fn facet_vertices(&self, i: usize) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| self.facets[i].slack(&self.vertices[v].0, 1) == 0)
            .collect()
    }

    /// Translate by an integer vector.
    pub fn translate(&self, v: &LatticePoint) -> LatticePolytope {
        let pts: Vec<LatticePoint> = self.vertices.iter().map(|p| p.add(v)).collect();
        Self::from_points(&pts).expect("translation preserves full dimension")
    }

    fn bounding_box(&self, k: i64) -> (Vec<i64>, Vec<i64>) {
        let lo = (0..self.dim).map(|c| self.vertices.iter().map(|v| v.0[c] * k).min().unwrap()).collect();
        let hi = (0..self.dim).map(|c| self.vertices.iter().map(|v| v.0[c] * k).max().unwrap()).collect();
        (lo, hi)
    }

    fn points_where(&self, k: i64, keep: impl Fn(&[i64]) -> bool) -> Vec<LatticePoint> {
        let (lo, hi) = self.bounding_box(k);
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            if self.facets.iter().all(|f| f.slack(&cur, k) >= 0) && keep(&cur) {
                out.push(LatticePoint(cur.clone()));
            }
            let mut c = self.dim;
            loop {
                if c == 0 {
                    return out;
                }
                c -= 1;
                if cur[c] < hi[c] {
                    cur[c] += 1;
                    break;
                }
                cur[c] = lo[c];
            }
        }
    }

    /// Lattice points of `kQ` in lexicographic order. `k = 0` gives the origin.
    pub fn lattice_points_scaled(&self, k: i64) -> Vec<LatticePoint> {
        assert!(k >= 0, "dilation factor must be nonnegative");
        self.points_where(k, |_| true)
    }

    /// Lattice points of `kQ` lying on none of the facets in `sel` (the set `kQ - D_I`).
    pub fn points_off_facets(&self, k: i64, sel: &FacetSelection) -> Vec<LatticePoint> {
        assert!(k >= 0, "dilation factor must be nonnegative");
        self.points_where(k, |m| sel.indices().iter().all(|&i| self.facets[i].slack(m, k) > 0))
    }

    /// Interior lattice points of `kQ`.
    pub fn interior_points(&self, k: i64) -> Vec<LatticePoint> {
        self.points_where(k, |m| self.facets.iter().all(|f| f.slack(m, k) > 0))
    }

    pub fn divisor_of_linear(&self, u: &[i64]) -> DivisorVector {
        DivisorVector(self.facets.iter().map(|f| f.normal.iter().zip(u).map(|(a, b)| a * b).sum()).collect())
    }

    /// The divisor `D_Q = sum a_i D_i`.
    pub fn polytope_divisor(&self) -> DivisorVector {
        DivisorVector(self.facets.iter().map(|f| f.offset).collect())
    }

    /// Vertex centroid, an interior rational point.
    pub fn centroid(&self) -> Vec<Rational> {
        let count = self.vertices.len() as i64;
        (0..self.dim)
            .map(|c| Rational::new(self.vertices.iter().map(|v| v.0[c]).sum::<i64>().into(), count.into()))
            .collect()
    }

    /// Vertices of the polar dual after translating the centroid to the origin;
    /// entry `i` is the vertex dual to facet `i`.
    pub fn polar_dual_vertices(&self) -> Vec<Vec<Rational>> {
        let c = self.centroid();
        self.facets
            .iter()
            .map(|f| {
                // <x + c, eta> >= -a  <=>  <x, -eta / (a + <c, eta>)> <= 1
                let shift: Rational = c.iter().zip(&f.normal).map(|(ci, e)| ci * rat(*e)).sum::<Rational>() + rat(f.offset);
                debug_assert!(shift > Rational::zero());
                f.normal.iter().map(|e| rat(-e) / &shift).collect()
            })
            .collect()
    }

    /// Number of lattice points on each segment, summed without double counting,
    /// for a set of edges given by vertex index pairs.
    pub fn lattice_points_on_edges(&self, edges: &[(usize, usize)]) -> usize {
        let mut pts: BTreeSet<LatticePoint> = BTreeSet::new();
        for &(a, b) in edges {
            let pa = &self.vertices[a];
            let d = self.vertices[b].sub(pa);
            let g = gcd_all(&d.0);
            let step = LatticePoint(d.0.iter().map(|x| x / g).collect());
            for t in 0..=g {
                pts.insert(pa.add(&step.scale(t)));
            }
        }
        pts.len()
    }

    /// Euclidean volume times `n!`, computed from a pulling triangulation.
    pub fn normalized_volume(&self) -> i64 {
        let apex = 0usize;
        let mut total = 0i64;
        fn simplices(q: &LatticePolytope, face_dim: usize, face: &[usize], apex: usize, chain: &mut Vec<usize>, total: &mut i64) {
            if face.contains(&apex) {
                return;
            }
            if face_dim == 0 {
                let mut rows = Vec::new();
                let a = &q.vertices[apex];
                for &v in chain.iter().chain(std::iter::once(&face[0])) {
                    rows.push(q.vertices[v].sub(a).0);
                }
                *total += int_det(&rows).abs();
                return;
            }
            // pull the face's lowest vertex, recurse over its facets (subfaces of one lower dimension)
            let pivot = face[0];
            for sub in q.faces(face_dim - 1) {
                if sub.vertices.iter().all(|v| face.contains(v)) && !sub.vertices.contains(&pivot) {
                    chain.push(pivot);
                    simplices(q, face_dim - 1, &sub.vertices, apex, chain, total);
                    chain.pop();
                }
            }
        }
        for f in 0..self.num_facets() {
            let fv = self.facet_vertices(f);
            let mut chain = Vec::new();
            simplices(self, self.dim - 1, &fv, apex, &mut chain, &mut total);
        }
        total
    }
}

/// Parses the support file format: one point per line, integers separated by
/// whitespace; blank lines and `#` comments are skipped.
pub fn parse_support(text: &str) -> Result<Vec<LatticePoint>> {
    let mut out: Vec<LatticePoint> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let coords = t
            .split_whitespace()
            .map(|w| w.parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse {
                line: lineno + 1,
                message: e.to_string(),
            })?;
        if let Some(first) = out.first() {
            if first.dim() != coords.len() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("expected {} coordinates, found {}", first.dim(), coords.len()),
                });
            }
        }
        out.push(LatticePoint(coords));
    }
    if out.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(out)
}

pub fn format_support(points: &[LatticePoint]) -> String {
    let mut s = String::new();
    for p in points {
        let words: Vec<String> = p.0.iter().map(|c| c.to_string()).collect();
        s.push_str(&words.join(" "));
        s.push('\n');
    }
    s
}

/// Supports used throughout the tests and the demo.
pub mod fixtures {
    use super::LatticePoint;

    pub fn unit_cube() -> Vec<LatticePoint> {
        let mut v = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    v.push(LatticePoint(vec![x, y, z]));
                }
            }
        }
        v
    }

    pub fn octahedron() -> Vec<LatticePoint> {
        let mut v = vec![LatticePoint(vec![0, 0, 0])];
        for c in 0..3 {
            for s in [1, -1] {
                let mut p = vec![0, 0, 0];
                p[c] = s;
                v.push(LatticePoint(p));
            }
        }
        v
    }

    /// `d` times the standard simplex in dimension `n`.
    pub fn dilated_simplex(n: usize, d: i64) -> Vec<LatticePoint> {
        let mut v = vec![LatticePoint(vec![0; n])];
        for c in 0..n {
            let mut p = vec![0; n];
            p[c] = d;
            v.push(LatticePoint(p));
        }
        v
    }
}

impl fmt::Display for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<m,{}> >= {}", LatticePoint(self.normal.clone()), -self.offset)
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn p(v: &[i64]) -> LatticePoint {
        LatticePoint(v.to_vec())
    }

    fn facet_index(q: &LatticePolytope, normal: &[i64]) -> usize {
        q.facets().iter().position(|f| f.normal == normal).expect("facet")
    }

    #[test]
    fn cube_facets() {
        let q = LatticePolytope::from_points(&unit_cube()).unwrap();
        assert_eq!(q.num_facets(), 6);
        for f in q.facets() {
            assert_eq!(f.normal.iter().map(|x| x.abs()).sum::<i64>(), 1);
            let expected = if f.normal.iter().sum::<i64>() < 0 { 1 } else { 0 };
            assert_eq!(f.offset, expected);
        }
        assert_eq!(q.vertices().len(), 8);
        assert_eq!(q.ridges().len(), 12);
    }

    #[test]
    fn octahedron_facets() {
        let q = LatticePolytope::from_points(&octahedron()).unwrap();
        assert_eq!(q.num_facets(), 8);
        for f in q.facets() {
            assert!(f.normal.iter().all(|x| x.abs() == 1));
            assert_eq!(f.offset, 1);
        }
        assert_eq!(q.vertices().len(), 6);
        assert_eq!(q.ridges().len(), 12);
    }

    #[test]
    fn degenerate_inputs() {
        let same = vec![p(&[1, 2, 3]); 4];
        assert!(matches!(LatticePolytope::from_points(&same), Err(Error::DegenerateSpan { .. })));
        let planar = vec![p(&[0, 0, 0]), p(&[1, 0, 0]), p(&[0, 1, 0]), p(&[1, 1, 0])];
        assert!(matches!(LatticePolytope::from_points(&planar), Err(Error::DegenerateSpan { rank: 2, .. })));
        assert_eq!(LatticePolytope::from_points(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn scaled_counts() {
        let cube = LatticePolytope::from_points(&unit_cube()).unwrap();
        assert_eq!(cube.lattice_points_scaled(1).len(), 8);
        assert_eq!(cube.lattice_points_scaled(2).len(), 27);
        let oct = LatticePolytope::from_points(&octahedron()).unwrap();
        assert_eq!(oct.lattice_points_scaled(1).len(), 7);
        let pts = cube.lattice_points_scaled(2);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cube_strip_points_off_facets() {
        let q = LatticePolytope::from_points(&unit_cube()).unwrap();
        let sel = FacetSelection::proper(&q, &[facet_index(&q, &[1, 0, 0]), facet_index(&q, &[-1, 0, 0]), facet_index(&q, &[0, 1, 0])]).unwrap();
        let got = q.points_off_facets(2, &sel);
        let want: Vec<LatticePoint> = [[1, 1, 0], [1, 1, 1], [1, 1, 2], [1, 2, 0], [1, 2, 1], [1, 2, 2]].iter().map(|v| p(v)).collect();
        assert_eq!(got, want);
        assert!(q.points_off_facets(1, &sel).is_empty());
    }

    #[test]
    fn octahedron_disk_points_off_facets() {
        let q = LatticePolytope::from_points(&octahedron()).unwrap();
        let sel: Vec<usize> = [[1, 1, 1], [-1, 1, 1], [1, -1, 1], [1, 1, -1]].iter().map(|n| facet_index(&q, n)).collect();
        let sel = FacetSelection::proper(&q, &sel).unwrap();
        assert_eq!(q.points_off_facets(1, &sel), vec![p(&[0, 0, 0])]);
    }

    #[test]
    fn divisor_vectors() {
        let cube = LatticePolytope::from_points(&unit_cube()).unwrap();
        assert!(cube.divisor_of_linear(&[0, 0, 0]).0.iter().all(|&x| x == 0));
        let d = cube.divisor_of_linear(&[1, 0, 0]);
        assert_eq!(d.0[facet_index(&cube, &[1, 0, 0])], 1);
        assert_eq!(d.0[facet_index(&cube, &[-1, 0, 0])], -1);
        assert_eq!(d.0.iter().map(|x| x.abs()).sum::<i64>(), 2);
        let oct = LatticePolytope::from_points(&octahedron()).unwrap();
        let d = oct.divisor_of_linear(&[1, 1, 1]);
        for (f, v) in oct.facets().iter().zip(&d.0) {
            assert_eq!(*v, f.normal.iter().sum::<i64>());
        }
        let mut vals: Vec<i64> = d.0.clone();
        vals.sort();
        assert_eq!(vals, vec![-3, -1, -1, -1, 1, 1, 1, 3]);
    }

    #[test]
    fn polar_duals() {
        let cube = LatticePolytope::from_points(&unit_cube()).unwrap();
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        for (v, f) in cube.polar_dual_vertices().iter().zip(cube.facets()) {
            // cube centered at (1/2,1/2,1/2) is [-1/2,1/2]^3, polar is the octahedron with vertices +-2 e_k
            let expected: Vec<Rational> = f.normal.iter().map(|e| rat(-e) / &half).collect();
            assert_eq!(v, &expected);
        }
        let oct = LatticePolytope::from_points(&octahedron()).unwrap();
        for (v, f) in oct.polar_dual_vertices().iter().zip(oct.facets()) {
            // centroid is the origin; polar vertex of <x,eta> >= -1 is -eta
            let expected: Vec<Rational> = f.normal.iter().map(|e| rat(-e)).collect();
            assert_eq!(v, &expected);
        }
        // simplex conv{0,e1,e2,e3}: centroid (1/4,1/4,1/4)
        let simplex = LatticePolytope::from_points(&dilated_simplex(3, 1)).unwrap();
        let duals = simplex.polar_dual_vertices();
        assert_eq!(duals.len(), 4);
        for (v, f) in duals.iter().zip(simplex.facets()) {
            if f.normal == vec![-1, -1, -1] {
                // <x,(-1,-1,-1)> >= -1 shifted: -1 + 3/4 => 1/4 -> vertex (4,4,4)
                assert_eq!(v, &vec![rat(4), rat(4), rat(4)]);
            } else {
                // x_i >= 0 shifted: 1/4 -> vertex -4 e_i
                let expected: Vec<Rational> = f.normal.iter().map(|e| rat(-4 * e)).collect();
                assert_eq!(v, &expected);
            }
        }
    }

    #[test]
    fn volumes() {
        assert_eq!(LatticePolytope::from_points(&unit_cube()).unwrap().normalized_volume(), 6);
        assert_eq!(LatticePolytope::from_points(&octahedron()).unwrap().normalized_volume(), 8);
        assert_eq!(LatticePolytope::from_points(&dilated_simplex(3, 1)).unwrap().normalized_volume(), 1);
        assert_eq!(LatticePolytope::from_points(&dilated_simplex(4, 2)).unwrap().normalized_volume(), 16);
    }

    #[test]
    fn higher_dimensional_simplex() {
        let q = LatticePolytope::from_points(&dilated_simplex(5, 2)).unwrap();
        assert_eq!(q.num_facets(), 6);
        assert_eq!(q.vertices().len(), 6);
        assert_eq!(q.lattice_points_scaled(1).len(), 21);
        assert_eq!(q.faces(0).len(), 6);
        assert_eq!(q.faces(3).len(), 15);
    }

    #[test]
    fn parse_support_file() {
        let pts = parse_support("# cube corner\n0 0 0\n\n1 0 0\n0 1 0\n0 0 1\n").unwrap();
        assert_eq!(pts.len(), 4);
        assert!(matches!(parse_support("0 0 0\n1 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_support("0 x 0\n"), Err(Error::Parse { line: 1, .. })));
        assert_eq!(parse_support("# only comments\n"), Err(Error::EmptyInput));
    }
}
