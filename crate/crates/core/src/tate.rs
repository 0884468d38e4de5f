//! The four-term window `T^-1 -> T^0 -> T^1 -> T^2` of the Tate resolution of
//! `O(-D_I)` on the toric threefold of `Q`.
//!
//! `phi_2` is written down from lattice points; `phi_1` and `phi_0` are minimal
//! free covers of successive kernels. With the torus weights carried along,
//! every generator's weight is a lattice point, which is how generators are
//! labelled and how the expected term list is audited. A dual generator's label
//! is the negative of its weight.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{minimal_free_cover, ExteriorAlgebra, ExteriorElement, FreeModuleMap, GradedFreeModule};
use crate::geometry::{FacetSelection, LatticePoint, LatticePolytope};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct GeneratorLabel {
    pub point: LatticePoint,
    pub dual: bool,
}

impl std::fmt::Display for GeneratorLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.dual {
            write!(f, "{}*", self.point)
        } else {
            write!(f, "{}", self.point)
        }
    }
}

#[derive(Clone, Debug)]
pub struct LabeledModule {
    pub module: GradedFreeModule,
    pub labels: Vec<GeneratorLabel>,
}

impl LabeledModule {
    fn from_weights(module: GradedFreeModule, dual_below: i64) -> Self {
        let labels = module
            .degrees
            .iter()
            .zip(&module.weights)
            .map(|(&d, w)| {
                let dual = d < dual_below;
                let point = LatticePoint(w.clone());
                GeneratorLabel {
                    point: if dual { point.neg() } else { point },
                    dual,
                }
            })
            .collect();
        LabeledModule { module, labels }
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    /// Generator indices in degree `d`.
    pub fn in_degree(&self, d: i64) -> Vec<usize> {
        (0..self.rank()).filter(|&j| self.module.degrees[j] == d).collect()
    }

    fn labels_in_degree(&self, d: i64) -> Vec<LatticePoint> {
        self.in_degree(d).into_iter().map(|j| self.labels[j].point.clone()).collect()
    }

    /// Order generators by degree (descending), then label.
    fn canonical_order(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.rank()).collect();
        perm.sort_by(|&a, &b| {
            self.module.degrees[b]
                .cmp(&self.module.degrees[a])
                .then_with(|| self.labels[a].cmp(&self.labels[b]))
        });
        perm
    }

    fn permuted(&self, perm: &[usize]) -> LabeledModule {
        LabeledModule {
            module: GradedFreeModule::with_weights(
                perm.iter().map(|&j| self.module.degrees[j]).collect(),
                perm.iter().map(|&j| self.module.weights[j].clone()).collect(),
            ),
            labels: perm.iter().map(|&j| self.labels[j].clone()).collect(),
        }
    }
}

/// Reorder the source generators of `f` (new position `p` holds old `perm[p]`).
fn permute_source(f: &FreeModuleMap, module: GradedFreeModule, perm: &[usize]) -> FreeModuleMap {
    let columns = perm.iter().map(|&j| f.columns[j].clone()).collect();
    FreeModuleMap::new(module, f.target.clone(), columns)
}

#[derive(Clone, Debug)]
pub struct TateWindow {
    /// `A = l(Q)` in canonical order; `e_i` is dual to the monomial of `points[i]`.
    pub points: Vec<LatticePoint>,
    pub algebra: ExteriorAlgebra,
    pub t_minus1: LabeledModule,
    pub t0: LabeledModule,
    pub t1: LabeledModule,
    pub t2: LabeledModule,
    /// `T^-1 -> T^0`
    pub phi0: FreeModuleMap,
    /// `T^0 -> T^1`
    pub phi1: FreeModuleMap,
    /// `T^1 -> T^2`
    pub phi2: FreeModuleMap,
}

/// The linear strand map: `g_m` for `m` in `l(3Q - D_I)` goes to
/// `sum_i e_i g_{m + a_i}` with targets in `l(4Q - D_I)`.
pub fn build_phi2(q: &LatticePolytope, sel: &FacetSelection) -> Result<(ExteriorAlgebra, LabeledModule, LabeledModule, FreeModuleMap)> {
    let points = q.lattice_points_scaled(1);
    let alg = ExteriorAlgebra::with_weights(points.iter().map(|p| p.neg().0).collect())?;
    let sources = q.points_off_facets(3, sel);
    let targets = q.points_off_facets(4, sel);
    let index: HashMap<&LatticePoint, usize> = targets.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let columns = sources
        .iter()
        .map(|m| {
            let mut col: Vec<(usize, ExteriorElement)> = points
                .iter()
                .enumerate()
                .map(|(i, a)| (index[&m.add(a)], ExteriorElement::generator(i)))
                .collect();
            col.sort_by_key(|(r, _)| *r);
            col
        })
        .collect();
    let module = |pts: &[LatticePoint], d: i64| {
        LabeledModule::from_weights(
            GradedFreeModule::with_weights(vec![d; pts.len()], pts.iter().map(|p| p.0.clone()).collect()),
            i64::MIN,
        )
    };
    let t1 = module(&sources, 1);
    let t2 = module(&targets, 2);
    let phi2 = FreeModuleMap::new(t1.module.clone(), t2.module.clone(), columns);
    Ok((alg, t1, t2, phi2))
}

fn audit(term: &str, found: Vec<LatticePoint>, expected: Vec<LatticePoint>, degree: i64) -> Result<()> {
    let mut found = found;
    found.sort();
    if found != expected {
        return Err(Error::DimensionMismatch {
            term: term.to_string(),
            detail: format!(
                "degree {degree}: expected {} generators, found {}",
                expected.len(),
                found.len()
            ),
        });
    }
    Ok(())
}

fn audit_degrees(term: &str, m: &LabeledModule, allowed: &[i64]) -> Result<()> {
    for (d, n) in m.module.degree_counts() {
        if !allowed.contains(&d) {
            return Err(Error::DimensionMismatch {
                term: term.to_string(),
                detail: format!("{n} unexpected generators in degree {d}"),
            });
        }
    }
    Ok(())
}

impl TateWindow {
    /// Build `phi_2` and step two terms to the left.
    pub fn compute(q: &LatticePolytope, sel: &FacetSelection) -> Result<TateWindow> {
        let (alg, t1, t2, phi2) = build_phi2(q, sel)?;
        let comp = sel.complement();

        let cover1 = minimal_free_cover(&alg, &phi2, -3, true)?;
        let t0 = LabeledModule::from_weights(cover1.module, -1);
        let perm = t0.canonical_order();
        let t0 = t0.permuted(&perm);
        let phi1 = permute_source(&cover1.map, t0.module.clone(), &perm);
        audit_degrees("T0", &t0, &[0, -3])?;
        audit("T0", t0.labels_in_degree(0), q.points_off_facets(2, sel), 0)?;
        audit("T0", t0.labels_in_degree(-3), q.points_off_facets(1, &comp), -3)?;

        let cover0 = minimal_free_cover(&alg, &phi1, -4, true)?;
        let tm1 = LabeledModule::from_weights(cover0.module, -2);
        let perm = tm1.canonical_order();
        let tm1 = tm1.permuted(&perm);
        let phi0 = permute_source(&cover0.map, tm1.module.clone(), &perm);
        audit_degrees("T-1", &tm1, &[-1, -4])?;
        audit("T-1", tm1.labels_in_degree(-1), q.points_off_facets(1, sel), -1)?;
        audit("T-1", tm1.labels_in_degree(-4), q.points_off_facets(2, &comp), -4)?;

        phi0.check_degrees()?;
        Ok(TateWindow {
            points: q.lattice_points_scaled(1),
            algebra: alg,
            t_minus1: tm1,
            t0,
            t1,
            t2,
            phi0,
            phi1,
            phi2,
        })
    }

    /// `phi_1 phi_2`-style compositions vanish entrywise.
    pub fn is_complex(&self) -> bool {
        self.phi1.then(&self.phi2).is_zero() && self.phi0.then(&self.phi1).is_zero()
    }

    /// Image and kernel dimensions agree at `T^0` and `T^1` in degrees `lo..=hi`.
    pub fn is_exact_in(&self, lo: i64, hi: i64) -> bool {
        (lo..=hi).all(|d| {
            self.phi1.rank_in_degree(&self.algebra, d) == self.phi2.kernel_dim_in_degree(&self.algebra, d)
                && self.phi0.rank_in_degree(&self.algebra, d) == self.phi1.kernel_dim_in_degree(&self.algebra, d)
        })
    }

    pub fn dump(&self) -> TateDump {
        let module = |name: &str, m: &LabeledModule| DumpModule {
            name: name.to_string(),
            generators: (0..m.rank())
                .map(|j| DumpGenerator {
                    degree: m.module.degrees[j],
                    point: m.labels[j].point.clone(),
                    dual: m.labels[j].dual,
                })
                .collect(),
        };
        let map = |name: &str, f: &FreeModuleMap| DumpMap {
            name: name.to_string(),
            rows: f.target.rank(),
            cols: f.source.rank(),
            entries: f
                .columns
                .iter()
                .enumerate()
                .flat_map(|(j, col)| {
                    col.iter().map(move |(i, x)| DumpEntry {
                        row: *i,
                        col: j,
                        degree: x.degree(),
                        terms: x.terms().len(),
                    })
                })
                .collect(),
        };
        TateDump {
            points: self.points.clone(),
            modules: vec![
                module("T-1", &self.t_minus1),
                module("T0", &self.t0),
                module("T1", &self.t1),
                module("T2", &self.t2),
            ],
            maps: vec![map("phi0", &self.phi0), map("phi1", &self.phi1), map("phi2", &self.phi2)],
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TateDump {
    pub points: Vec<LatticePoint>,
    pub modules: Vec<DumpModule>,
    pub maps: Vec<DumpMap>,
}

#[derive(Debug, Serialize)]
pub struct DumpModule {
    pub name: String,
    pub generators: Vec<DumpGenerator>,
}

#[derive(Debug, Serialize)]
pub struct DumpGenerator {
    pub degree: i64,
    pub point: LatticePoint,
    pub dual: bool,
}

#[derive(Debug, Serialize)]
pub struct DumpMap {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<DumpEntry>,
}

#[derive(Debug, Serialize)]
pub struct DumpEntry {
    pub row: usize,
    pub col: usize,
    pub degree: Option<i64>,
    pub terms: usize,
}
