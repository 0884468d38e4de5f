//! Partial shellings of the boundary of a 3-polytope and the search for the
//! facet selection that minimizes the resultant matrix.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{FacetSelection, LatticePolytope};
use crate::linalg::{rat, Rational};

/// What facet `facet` shares with the union of the facets placed before it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShellingStep {
    pub facet: usize,
    /// Edges as vertex index pairs.
    pub shared_edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialShelling {
    pub order: Vec<usize>,
    pub certificate: Vec<ShellingStep>,
    selection: FacetSelection,
}

impl PartialShelling {
    pub fn selection(&self) -> &FacetSelection {
        &self.selection
    }
}

fn require_3d(q: &LatticePolytope) {
    assert_eq!(q.dim(), 3, "shelling operations are implemented for 3-polytopes");
}

/// Edges of facet `f` as `(vertex pair, other facet)`.
fn facet_edges(q: &LatticePolytope, f: usize) -> Vec<((usize, usize), usize)> {
    q.ridges()
        .iter()
        .filter(|e| e.facets.contains(&f))
        .map(|e| {
            let other = *e.facets.iter().find(|&&g| g != f).expect("edge lies in two facets");
            ((e.vertices[0], e.vertices[1]), other)
        })
        .collect()
}

fn edges_connected(edges: &[(usize, usize)]) -> bool {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let Some(&start) = adj.keys().next() else {
        return false;
    };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in &adj[&v] {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == adj.len()
}

/// Checks the partial shelling condition for an ordered facet sequence: each
/// facet after the first meets the union of its predecessors in a nonempty
/// connected union of its edges.
pub fn is_partial_shelling(q: &LatticePolytope, order: &[usize]) -> (bool, Vec<ShellingStep>) {
    require_3d(q);
    let mut certificate = Vec::new();
    for (j, &f) in order.iter().enumerate() {
        if j == 0 {
            certificate.push(ShellingStep {
                facet: f,
                shared_edges: Vec::new(),
            });
            continue;
        }
        let prior: BTreeSet<usize> = order[..j].iter().copied().collect();
        let shared: Vec<(usize, usize)> = facet_edges(q, f)
            .into_iter()
            .filter(|(_, other)| prior.contains(other))
            .map(|(e, _)| e)
            .collect();
        let prior_vertices: BTreeSet<usize> = prior.iter().flat_map(|&g| q.facet_vertices(g)).collect();
        let touching: BTreeSet<usize> = q.facet_vertices(f).into_iter().filter(|v| prior_vertices.contains(v)).collect();
        let covered: BTreeSet<usize> = shared.iter().flat_map(|&(a, b)| [a, b]).collect();
        let ok = !shared.is_empty() && touching == covered && edges_connected(&shared);
        certificate.push(ShellingStep {
            facet: f,
            shared_edges: shared,
        });
        if !ok {
            return (false, certificate);
        }
    }
    (true, certificate)
}

/// Edges of the subcomplex spanned by `sel`, with the number of selected facets on each.
fn selected_edges(q: &LatticePolytope, sel: &FacetSelection) -> Vec<((usize, usize), usize)> {
    q.ridges()
        .iter()
        .filter_map(|e| {
            let count = e.facets.iter().filter(|&&f| sel.contains(f)).count();
            (count > 0).then(|| ((e.vertices[0], e.vertices[1]), count))
        })
        .collect()
}

/// Edges on the relative boundary of `|D_I|`.
pub fn boundary_edges(q: &LatticePolytope, sel: &FacetSelection) -> Vec<(usize, usize)> {
    selected_edges(q, sel).into_iter().filter(|(_, c)| *c == 1).map(|(e, _)| e).collect()
}

/// `B_I`: lattice points on the relative boundary of `|D_I|`.
pub fn boundary_lattice_points(q: &LatticePolytope, sel: &FacetSelection) -> usize {
    q.lattice_points_on_edges(&boundary_edges(q, sel))
}

/// Combinatorial disk test: the union is connected, has Euler characteristic
/// one, and its boundary edges form one simple closed cycle.
pub fn is_disk(q: &LatticePolytope, sel: &FacetSelection) -> bool {
    require_3d(q);
    if sel.is_empty() || sel.len() == q.num_facets() {
        return false;
    }
    let edges = selected_edges(q, sel);
    if edges.iter().any(|(_, c)| *c > 2) {
        return false;
    }
    let vertices: BTreeSet<usize> = sel.indices().iter().flat_map(|&f| q.facet_vertices(f)).collect();
    let euler = vertices.len() as i64 - edges.len() as i64 + sel.len() as i64;
    if euler != 1 {
        return false;
    }
    // connectivity through shared vertices
    let all_edges: Vec<(usize, usize)> = edges.iter().map(|(e, _)| *e).collect();
    if !edges_connected(&all_edges) {
        return false;
    }
    let boundary = boundary_edges(q, sel);
    let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
    for &(a, b) in &boundary {
        *degree.entry(a).or_default() += 1;
        *degree.entry(b).or_default() += 1;
    }
    !boundary.is_empty() && degree.values().all(|&d| d == 2) && edges_connected(&boundary)
}

/// Orders a selection as a partial shelling by depth-first search, if possible.
pub fn shelling_order(q: &LatticePolytope, sel: &FacetSelection) -> Option<Vec<usize>> {
    fn extend(q: &LatticePolytope, sel: &FacetSelection, order: &mut Vec<usize>) -> bool {
        if order.len() == sel.len() {
            return true;
        }
        for &f in sel.indices() {
            if order.contains(&f) {
                continue;
            }
            order.push(f);
            if is_partial_shelling(q, order).0 && extend(q, sel, order) {
                return true;
            }
            order.pop();
        }
        false
    }
    for &first in sel.indices() {
        let mut order = vec![first];
        if extend(q, sel, &mut order) {
            return Some(order);
        }
    }
    None
}

/// Certifies an explicit facet order.
pub fn from_order(q: &LatticePolytope, order: &[usize]) -> Result<PartialShelling> {
    let selection = FacetSelection::proper(q, order)?;
    let (ok, certificate) = is_partial_shelling(q, order);
    if !ok {
        return Err(Error::InvalidSelection(format!("{order:?} is not a partial shelling")));
    }
    Ok(PartialShelling {
        order: order.to_vec(),
        certificate,
        selection,
    })
}

/// Certifies an unordered selection by finding a shelling order for it.
pub fn from_selection(q: &LatticePolytope, sel: &FacetSelection) -> Result<PartialShelling> {
    if !is_disk(q, sel) {
        return Err(Error::InvalidSelection(format!("facets {:?} do not form a disk", sel.indices())));
    }
    let order = shelling_order(q, sel).ok_or_else(|| Error::InvalidSelection("disk without a shelling order".into()))?;
    from_order(q, &order)
}

/// Line shelling: facets ordered by the direction's functional on the polar
/// vertices, descending; the first `steps` facets are returned.
pub fn line_shelling(q: &LatticePolytope, direction: &[Rational], steps: usize) -> Result<PartialShelling> {
    require_3d(q);
    if steps == 0 || steps >= q.num_facets() {
        return Err(Error::InvalidSelection(format!(
            "line shelling length must be in 1..{}",
            q.num_facets()
        )));
    }
    let values: Vec<Rational> = q
        .polar_dual_vertices()
        .iter()
        .map(|v| v.iter().zip(direction).map(|(a, b)| a * b).fold(Rational::zero(), |s, x| s + x))
        .collect();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].cmp(&values[a]));
    if let Some(w) = order.windows(2).find(|w| values[w[0]] == values[w[1]]) {
        return Err(Error::NonGenericDirection(w[0].min(w[1]), w[0].max(w[1])));
    }
    order.truncate(steps);
    from_order(q, &order)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStrategy {
    pub seed: u64,
    /// Number of random line shelling directions.
    pub directions: usize,
    /// Exhaustive disk enumeration is used when the facet count is at most this.
    pub exhaustive_limit: usize,
}

impl Default for SearchStrategy {
    fn default() -> Self {
        SearchStrategy {
            seed: 0,
            directions: 32,
            exhaustive_limit: 12,
        }
    }
}

/// Picks a certified disk selection with the largest boundary point count `B_I`,
/// which minimizes the matrix size; ties go to the lexicographically smallest
/// index set.
pub fn best_selection(q: &LatticePolytope, strategy: &SearchStrategy) -> Result<PartialShelling> {
    require_3d(q);
    let s = q.num_facets();
    let mut candidates: BTreeMap<Vec<usize>, PartialShelling> = BTreeMap::new();
    let mut rng = ChaCha8Rng::seed_from_u64(strategy.seed);
    for _ in 0..strategy.directions {
        let dir: Vec<Rational> = (0..3).map(|_| rat(rng.gen_range(-1_000_000..=1_000_000))).collect();
        for k in 1..s {
            match line_shelling(q, &dir, k) {
                Ok(sh) => {
                    candidates.entry(sh.selection.indices().to_vec()).or_insert(sh);
                }
                Err(Error::NonGenericDirection(..)) => break,
                Err(_) => {}
            }
        }
    }
    if s <= strategy.exhaustive_limit {
        for mask in 1u64..(1u64 << s) - 1 {
            let idx: Vec<usize> = (0..s).filter(|i| mask >> i & 1 == 1).collect();
            if candidates.contains_key(&idx) {
                continue;
            }
            let sel = FacetSelection::proper(q, &idx)?;
            if let Ok(sh) = from_selection(q, &sel) {
                candidates.insert(idx, sh);
            }
        }
    }
    let mut best: Option<(usize, PartialShelling)> = None;
    for (_, sh) in candidates {
        let b = boundary_lattice_points(q, &sh.selection);
        if best.as_ref().is_none_or(|(bb, _)| b > *bb) {
            best = Some((b, sh));
        }
    }
    best.map(|(_, sh)| sh).ok_or(Error::NoDiskSelection)
}
