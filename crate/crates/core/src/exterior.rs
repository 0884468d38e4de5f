//! The exterior algebra `E` on `N` generators of degree -1, graded free
//! `E`-modules, maps between them, and the degreewise linear algebra used to
//! resolve them.
//!
//! Modules are left modules; a map `f` sends generator `j` of its source to
//! `sum_i a_ij g_i`, so `f(x g_j) = sum_i (x ^ a_ij) g_i`. Generator degrees are
//! stored directly: a generator in degree `d` spans a copy of `E` shifted so that
//! `e_S g` sits in degree `d - |S|`.
//!
//! Everything may additionally carry a multigrading: each `e_i` has a weight
//! vector and each generator a weight, and homogeneous maps preserve weight.
//! Degree pieces then split into independent weight blocks, which is what keeps
//! the Tate computations small.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rat, Echelon, Rational, SparseMatrix, SparseVec};

/// Subset of `{0..N}` as a bitmask.
pub type Mask = u64;
pub type Weight = Vec<i64>;

pub fn mask_of(indices: &[usize]) -> Mask {
    indices.iter().fold(0, |m, i| m | (1 << i))
}

pub fn mask_indices(mask: Mask) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

/// Lexicographic order of the sorted index tuples.
pub fn monomial_cmp(a: Mask, b: Mask) -> Ordering {
    let diff = a ^ b;
    if diff == 0 {
        return Ordering::Equal;
    }
    let p = diff.trailing_zeros();
    let above = if p == 63 { 0 } else { !0u64 << (p + 1) };
    if a >> p & 1 == 1 {
        if b & above != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    } else if a & above != 0 {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Sign of `e_S ^ e_T` relative to `e_{S u T}`; zero when they overlap.
pub fn wedge_sign(s: Mask, t: Mask) -> i32 {
    if s & t != 0 {
        return 0;
    }
    let mut inversions = 0u32;
    let mut rest = t;
    while rest != 0 {
        let b = rest.trailing_zeros();
        inversions += if b == 63 { 0 } else { (s >> (b + 1)).count_ones() };
        rest &= rest - 1;
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// All `k`-subsets of `{0..n}` in canonical order.
pub fn subsets(n: usize, k: usize) -> Vec<Mask> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(mask_of(&idx));
        let mut i = k;
        loop {
            if i == 0 {
                return out;
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

/// An element of `E`: rational combination of monomials `e_S`, each stored with
/// `S` ascending and sorted in canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExteriorElement {
    terms: Vec<(Mask, Rational)>,
}

impl ExteriorElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, Rational::one())
    }

    pub fn monomial(mask: Mask, coeff: Rational) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        ExteriorElement {
            terms: vec![(mask, coeff)],
        }
    }

    pub fn generator(i: usize) -> Self {
        Self::monomial(1 << i, Rational::one())
    }

    /// `coeff * e_{i1} ^ ... ^ e_{ik}` for indices in any order.
    pub fn from_indices(indices: &[usize], coeff: Rational) -> Self {
        let mut acc = Self::one();
        for &i in indices {
            acc = acc.wedge(&Self::generator(i));
        }
        acc.scale(&coeff)
    }

    pub fn from_terms<I: IntoIterator<Item = (Mask, Rational)>>(terms: I) -> Self {
        let mut acc: BTreeMap<MaskKey, Rational> = BTreeMap::new();
        for (m, c) in terms {
            *acc.entry(MaskKey(m)).or_insert_with(Rational::zero) += c;
        }
        ExteriorElement {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k.0, c)).collect(),
        }
    }

    pub fn terms(&self) -> &[(Mask, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree `-|S|` if homogeneous and nonzero.
    pub fn degree(&self) -> Option<i64> {
        let first = self.terms.first()?.0.count_ones();
        self.terms
            .iter()
            .all(|(m, _)| m.count_ones() == first)
            .then_some(-(first as i64))
    }

    pub fn coefficient(&self, mask: Mask) -> Rational {
        self.terms.iter().find(|(m, _)| *m == mask).map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, f: &Rational) -> Self {
        if f.is_zero() {
            return Self::zero();
        }
        ExteriorElement {
            terms: self.terms.iter().map(|(m, c)| (*m, c * f)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn wedge(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().flat_map(|(s, a)| {
            other.terms.iter().filter_map(move |(t, b)| {
                let sign = wedge_sign(*s, *t);
                (sign != 0).then(|| (s | t, a * b * rat(sign as i64)))
            })
        }))
    }

    /// `e_S ^ self` for a single monomial `e_S`.
    pub fn left_multiply(&self, s: Mask) -> impl Iterator<Item = (Mask, Rational)> + '_ {
        self.terms.iter().filter_map(move |(t, c)| {
            let sign = wedge_sign(s, *t);
            match sign {
                0 => None,
                1 => Some((s | t, c.clone())),
                _ => Some((s | t, -c.clone())),
            }
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
struct MaskKey(Mask);

impl PartialOrd for MaskKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MaskKey {
    fn cmp(&self, other: &Self) -> Ordering {
        monomial_cmp(self.0, other.0)
    }
}

/// The exterior algebra on `n` generators, with optional weights on the `e_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExteriorAlgebra {
    n: usize,
    weights: Vec<Weight>,
}

impl ExteriorAlgebra {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_weights(vec![Vec::new(); n])
    }

    pub fn with_weights(weights: Vec<Weight>) -> Result<Self> {
        if weights.len() > 64 {
            return Err(Error::TooManyGenerators(weights.len()));
        }
        Ok(ExteriorAlgebra {
            n: weights.len(),
            weights,
        })
    }

    pub fn num_generators(&self) -> usize {
        self.n
    }

    pub fn weight_of(&self, base: &[i64], s: Mask) -> Weight {
        let mut w = base.to_vec();
        let mut rest = s;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            for (a, b) in w.iter_mut().zip(&self.weights[i]) {
                *a += b;
            }
            rest &= rest - 1;
        }
        w
    }
}

/// `sum_j E(-d_j)` in the convention that generator `j` sits in degree `d_j`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedFreeModule {
    pub degrees: Vec<i64>,
    pub weights: Vec<Weight>,
}

impl GradedFreeModule {
    pub fn new(degrees: Vec<i64>) -> Self {
        let weights = vec![Vec::new(); degrees.len()];
        GradedFreeModule { degrees, weights }
    }

    pub fn with_weights(degrees: Vec<i64>, weights: Vec<Weight>) -> Self {
        assert_eq!(degrees.len(), weights.len());
        GradedFreeModule { degrees, weights }
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    /// Generator count per degree.
    pub fn degree_counts(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for d in &self.degrees {
            *out.entry(*d).or_insert(0) += 1;
        }
        out
    }

    /// Basis `(generator, e_S)` of the degree-`d` piece, in canonical order.
    pub fn piece_basis(&self, alg: &ExteriorAlgebra, d: i64) -> Vec<(usize, Mask)> {
        let mut out = Vec::new();
        for (j, &dj) in self.degrees.iter().enumerate() {
            let k = dj - d;
            if k < 0 || k as usize > alg.n {
                continue;
            }
            out.extend(subsets(alg.n, k as usize).into_iter().map(|s| (j, s)));
        }
        out
    }

    /// The degree-`d` basis split by weight; each block keeps canonical order.
    pub fn piece_blocks(&self, alg: &ExteriorAlgebra, d: i64) -> BTreeMap<Weight, Vec<(usize, Mask)>> {
        let mut blocks: BTreeMap<Weight, Vec<(usize, Mask)>> = BTreeMap::new();
        for (j, s) in self.piece_basis(alg, d) {
            blocks.entry(alg.weight_of(&self.weights[j], s)).or_default().push((j, s));
        }
        blocks
    }
}

/// An element of a free module: `sum_j x_j g_j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModuleElement {
    pub components: Vec<(usize, ExteriorElement)>,
}

impl ModuleElement {
    fn from_coordinates(basis: &[(usize, Mask)], v: &SparseVec) -> Self {
        let mut by_gen: BTreeMap<usize, Vec<(Mask, Rational)>> = BTreeMap::new();
        for (i, c) in v.entries() {
            let (j, s) = basis[*i];
            by_gen.entry(j).or_default().push((s, c.clone()));
        }
        ModuleElement {
            components: by_gen.into_iter().map(|(j, t)| (j, ExteriorElement::from_terms(t))).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|(_, x)| x.is_zero())
    }
}

/// Homomorphism of graded free modules, stored by source column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeModuleMap {
    pub source: GradedFreeModule,
    pub target: GradedFreeModule,
    /// `columns[j]` lists `(i, a_ij)` with `a_ij` nonzero, `i` ascending.
    pub columns: Vec<Vec<(usize, ExteriorElement)>>,
}

impl FreeModuleMap {
    pub fn new(source: GradedFreeModule, target: GradedFreeModule, columns: Vec<Vec<(usize, ExteriorElement)>>) -> Self {
        assert_eq!(columns.len(), source.rank());
        FreeModuleMap { source, target, columns }
    }

    pub fn zero(source: GradedFreeModule, target: GradedFreeModule) -> Self {
        let columns = vec![Vec::new(); source.rank()];
        FreeModuleMap { source, target, columns }
    }

    pub fn identity(module: GradedFreeModule) -> Self {
        let columns = (0..module.rank()).map(|j| vec![(j, ExteriorElement::one())]).collect();
        FreeModuleMap {
            source: module.clone(),
            target: module,
            columns,
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> ExteriorElement {
        self.columns[j]
            .iter()
            .find(|(r, _)| *r == i)
            .map(|(_, x)| x.clone())
            .unwrap_or_default()
    }

    /// Every nonzero entry must be homogeneous of degree `d_source - d_target`.
    pub fn check_degrees(&self) -> Result<()> {
        for (j, col) in self.columns.iter().enumerate() {
            for (i, x) in col {
                let want = self.source.degrees[j] - self.target.degrees[*i];
                if x.degree() != Some(want) {
                    return Err(Error::DegreePatternViolation {
                        row: *i,
                        col: j,
                        detail: format!("expected degree {want}, found {:?}", x.degree()),
                    });
                }
            }
        }
        Ok(())
    }

    /// `other o self`.
    pub fn then(&self, other: &FreeModuleMap) -> FreeModuleMap {
        assert_eq!(self.target.rank(), other.source.rank());
        let columns = self
            .columns
            .iter()
            .map(|col| {
                let mut acc: BTreeMap<usize, ExteriorElement> = BTreeMap::new();
                for (i, a) in col {
                    for (l, b) in &other.columns[*i] {
                        let slot = acc.entry(*l).or_default();
                        *slot = slot.add(&a.wedge(b));
                    }
                }
                acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
            })
            .collect();
        FreeModuleMap {
            source: self.source.clone(),
            target: other.target.clone(),
            columns,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.iter().all(|(_, x)| x.is_zero()))
    }

    /// Image of the basis element `e_S g_j` as `(target generator, mask, coeff)` terms.
    fn image_terms(&self, j: usize, s: Mask) -> impl Iterator<Item = ((usize, Mask), Rational)> + '_ {
        self.columns[j]
            .iter()
            .flat_map(move |(i, a)| a.left_multiply(s).map(move |(m, c)| ((*i, m), c)))
    }

    /// The degree-`d` component as a plain matrix, rows and columns in the
    /// canonical `(generator, monomial)` order.
    pub fn graded_piece(&self, alg: &ExteriorAlgebra, d: i64) -> SparseMatrix {
        let cols = self.source.piece_basis(alg, d);
        let rows = self.target.piece_basis(alg, d);
        let index: HashMap<(usize, Mask), usize> = rows.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        let columns: Vec<SparseVec> = cols
            .iter()
            .map(|&(j, s)| SparseVec::from_entries(self.image_terms(j, s).map(|(key, c)| (index[&key], c))))
            .collect();
        SparseMatrix::from_columns(rows.len(), &columns)
    }

    /// Restriction to one weight block of the degree-`d` piece; rows are
    /// numbered in order of first appearance, which does not affect kernels.
    fn block_matrix(&self, basis: &[(usize, Mask)]) -> SparseMatrix {
        let mut index: HashMap<(usize, Mask), usize> = HashMap::new();
        let columns: Vec<SparseVec> = basis
            .iter()
            .map(|&(j, s)| {
                SparseVec::from_entries(self.image_terms(j, s).map(|(key, c)| {
                    let next = index.len();
                    (*index.entry(key).or_insert(next), c)
                }))
            })
            .collect();
        SparseMatrix::from_columns(index.len(), &columns)
    }

    /// Basis of the degree-`d` kernel, in reduced echelon form with respect to
    /// the canonical basis order.
    pub fn kernel_in_degree(&self, alg: &ExteriorAlgebra, d: i64) -> Vec<ModuleElement> {
        let basis = self.source.piece_basis(alg, d);
        let position: HashMap<(usize, Mask), usize> = basis.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        let mut found: Vec<(usize, ModuleElement)> = Vec::new();
        for block in self.source.piece_blocks(alg, d).values() {
            for v in self.block_matrix(block).kernel() {
                // the free column of an RREF kernel vector is its last entry
                let free = position[&block[v.entries().last().expect("nonzero").0]];
                found.push((free, ModuleElement::from_coordinates(block, &v)));
            }
        }
        found.sort_by_key(|(f, _)| *f);
        found.into_iter().map(|(_, e)| e).collect()
    }

    /// Rank of the degree-`d` piece, computed blockwise.
    pub fn rank_in_degree(&self, alg: &ExteriorAlgebra, d: i64) -> usize {
        self.source
            .piece_blocks(alg, d)
            .values()
            .map(|b| self.block_matrix(b).rank())
            .sum()
    }

    /// Dimension of the degree-`d` kernel, computed blockwise.
    pub fn kernel_dim_in_degree(&self, alg: &ExteriorAlgebra, d: i64) -> usize {
        self.source.piece_basis(alg, d).len() - self.rank_in_degree(alg, d)
    }
}

#[derive(Clone, Debug)]
pub struct FreeCover {
    pub module: GradedFreeModule,
    /// Map from the cover onto the kernel, landing in the source of the resolved map.
    pub map: FreeModuleMap,
}

/// Sparse vector in a graded piece, indexed by (generator, monomial).
type PieceVector = Vec<((usize, Mask), Rational)>;

/// Minimal free cover of `ker f`, built from the top degree down to `floor`.
///
/// In each degree and weight, new generators are the kernel basis vectors that
/// are not in the span of `E` times the generators already chosen. With
/// `probe` set, degree `floor - 1` is also examined and any generator found there
/// is reported as [`Error::FloorTooHigh`].
pub fn minimal_free_cover(alg: &ExteriorAlgebra, f: &FreeModuleMap, floor: i64, probe: bool) -> Result<FreeCover> {
    let Some(&top) = f.source.degrees.iter().max() else {
        let module = GradedFreeModule::default();
        return Ok(FreeCover {
            map: FreeModuleMap::zero(module.clone(), f.source.clone()),
            module,
        });
    };
    let last = if probe { floor - 1 } else { floor };
    let mut degrees = Vec::new();
    let mut weights = Vec::new();
    let mut columns: Vec<Vec<(usize, ExteriorElement)>> = Vec::new();

    let mut d = top;
    while d >= last {
        let blocks = f.source.piece_blocks(alg, d);
        // E-multiples of the generators chosen so far, bucketed by weight
        let mut multiples: HashMap<Weight, Vec<PieceVector>> = HashMap::new();
        for (g, col) in columns.iter().enumerate() {
            let k = degrees[g] - d;
            if k <= 0 || k as usize > alg.n {
                continue;
            }
            let gen_weight: &Weight = &weights[g];
            for s in subsets(alg.n, k as usize) {
                let w = alg.weight_of(gen_weight, s);
                if !blocks.contains_key(&w) {
                    continue;
                }
                let terms: Vec<((usize, Mask), Rational)> = col
                    .iter()
                    .flat_map(|(j, a): &(usize, ExteriorElement)| a.left_multiply(s).map(move |(m, c)| ((*j, m), c)))
                    .collect();
                if !terms.is_empty() {
                    multiples.entry(w).or_default().push(terms);
                }
            }
        }
        for (w, block) in &blocks {
            let kernel = f.block_matrix(block).kernel();
            if kernel.is_empty() {
                continue;
            }
            let local: HashMap<(usize, Mask), usize> = block.iter().enumerate().map(|(i, b)| (*b, i)).collect();
            let mut span = Echelon::new();
            if let Some(ms) = multiples.get(w) {
                for terms in ms {
                    span.insert(&SparseVec::from_entries(terms.iter().map(|(key, c)| (local[key], c.clone()))));
                }
            }
            for mut v in kernel {
                if !span.insert(&v) {
                    continue;
                }
                if d < floor {
                    return Err(Error::FloorTooHigh { floor });
                }
                v.make_primitive();
                let elem = ModuleElement::from_coordinates(block, &v);
                degrees.push(d);
                weights.push(w.clone());
                columns.push(elem.components);
            }
        }
        d -= 1;
    }
    let module = GradedFreeModule::with_weights(degrees, weights);
    let map = FreeModuleMap::new(module.clone(), f.source.clone(), columns);
    Ok(FreeCover { module, map })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(indices: &[usize]) -> ExteriorElement {
        ExteriorElement::from_indices(indices, rat(1))
    }

    #[test]
    fn wedge_basics() {
        assert!(e(&[0]).wedge(&e(&[0])).is_zero());
        assert_eq!(e(&[1]).wedge(&e(&[0])), ExteriorElement::monomial(0b11, rat(-1)));
        let a = e(&[0]).add(&e(&[1]));
        let b = e(&[0]).add(&e(&[1]).scale(&rat(-1)));
        assert_eq!(a.wedge(&b), ExteriorElement::monomial(0b11, rat(-2)));
    }

    #[test]
    fn from_indices_normalizes_sign() {
        let x = ExteriorElement::from_indices(&[1, 0, 2, 3], rat(3));
        assert_eq!(x, ExteriorElement::monomial(0b1111, rat(-3)));
    }

    #[test]
    fn monomial_order_is_lexicographic() {
        let mut all = subsets(5, 3);
        let sorted = all.clone();
        all.sort_by(|a, b| monomial_cmp(*a, *b));
        assert_eq!(all, sorted);
        assert_eq!(mask_indices(sorted[0]), vec![0, 1, 2]);
        assert_eq!(mask_indices(sorted[1]), vec![0, 1, 3]);
        assert_eq!(monomial_cmp(mask_of(&[0]), mask_of(&[0, 1])), Ordering::Less);
        assert_eq!(monomial_cmp(mask_of(&[1]), mask_of(&[0, 5])), Ordering::Greater);
    }

    #[test]
    fn identity_piece() {
        let alg = ExteriorAlgebra::new(4).unwrap();
        let id = FreeModuleMap::identity(GradedFreeModule::new(vec![0]));
        let m = id.graded_piece(&alg, -1);
        assert_eq!((m.nrows, m.ncols), (4, 4));
        for (i, r) in m.rows.iter().enumerate() {
            assert_eq!(r.entries(), &[(i, rat(1))]);
        }
    }

    #[test]
    fn zero_map_piece_and_kernel() {
        let alg = ExteriorAlgebra::new(3).unwrap();
        let z = FreeModuleMap::zero(GradedFreeModule::new(vec![0, 0]), GradedFreeModule::new(vec![1]));
        let m = z.graded_piece(&alg, -1);
        assert_eq!((m.nrows, m.ncols), (3, 6));
        assert!(m.is_zero());
        assert_eq!(z.kernel_in_degree(&alg, -1).len(), 6);
    }

    #[test]
    fn injective_kernel_is_empty() {
        let alg = ExteriorAlgebra::new(3).unwrap();
        let id = FreeModuleMap::identity(GradedFreeModule::new(vec![0, 2]));
        for d in -3..=2 {
            assert!(id.kernel_in_degree(&alg, d).is_empty());
        }
    }

    #[test]
    fn cover_of_whole_module_is_itself() {
        // kernel of the zero map is the whole source
        let alg = ExteriorAlgebra::new(3).unwrap();
        let src = GradedFreeModule::new(vec![1, 0]);
        let z = FreeModuleMap::zero(src.clone(), GradedFreeModule::new(vec![]));
        let cover = minimal_free_cover(&alg, &z, -3, true).unwrap();
        assert_eq!(cover.module.degrees, vec![1, 0]);
        assert_eq!(cover.map, FreeModuleMap::identity(src));
    }

    #[test]
    fn koszul_cover() {
        // multiplication by e_0 on E has kernel e_0 E
        let alg = ExteriorAlgebra::new(3).unwrap();
        let src = GradedFreeModule::new(vec![0]);
        let tgt = GradedFreeModule::new(vec![1]);
        let f = FreeModuleMap::new(src, tgt, vec![vec![(0, e(&[0]))]]);
        let cover = minimal_free_cover(&alg, &f, -3, true).unwrap();
        assert_eq!(cover.module.degrees, vec![-1]);
        assert_eq!(cover.map.entry(0, 0), e(&[0]));
        assert!(cover.map.then(&f).is_zero());
    }

    #[test]
    fn floor_probe_detects_low_generators() {
        let alg = ExteriorAlgebra::new(3).unwrap();
        let z = FreeModuleMap::zero(GradedFreeModule::new(vec![0, -2]), GradedFreeModule::new(vec![]));
        assert!(matches!(minimal_free_cover(&alg, &z, -1, true), Err(Error::FloorTooHigh { floor: -1 })));
        let c = minimal_free_cover(&alg, &z, -1, false).unwrap();
        assert_eq!(c.module.degrees, vec![0]);
    }
}
