use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use resultant_core::bracket::{BracketMatrix, CoefficientSystem};
use resultant_core::ehrhart::EhrhartPair;
use resultant_core::geometry::{parse_support, FacetSelection, LatticePoint, LatticePolytope};
use resultant_core::linalg::{rat, Rational};
use resultant_core::shelling::{best_selection, from_selection, line_shelling, PartialShelling, SearchStrategy};
use resultant_core::tate::TateWindow;
use resultant_core::verify;
use resultant_core::Error;

use crate::{Common, VerificationFailure};

fn load(c: &Common) -> Result<(Vec<LatticePoint>, LatticePolytope)> {
    let text = fs::read_to_string(&c.support).with_context(|| format!("reading {}", c.support.display()))?;
    let points = parse_support(&text)?;
    let q = LatticePolytope::from_points(&points)?;
    Ok((points, q))
}

fn bad_spec(spec: &str) -> Error {
    Error::Parse {
        line: 0,
        message: format!("invalid shelling spec `{spec}`; expected auto, indices=i1,i2,... or direction=x,y,z:k"),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, spec: &str) -> Result<Vec<T>, Error> {
    s.split(',').map(|t| t.trim().parse().map_err(|_| bad_spec(spec))).collect()
}

/// Facet indices named by `indices=...`, if that is the spec form.
fn explicit_indices(q: &LatticePolytope, spec: &str) -> Result<Option<FacetSelection>> {
    match spec.strip_prefix("indices=") {
        Some(list) => {
            let idx: Vec<usize> = parse_list(list, spec)?;
            Ok(Some(FacetSelection::proper(q, &idx)?))
        }
        None => Ok(None),
    }
}

fn shelling(q: &LatticePolytope, spec: &str, seed: u64) -> Result<PartialShelling> {
    if q.dim() != 3 {
        return Err(Error::DimensionInconsistent {
            expected: 3,
            found: q.dim(),
        }
        .into());
    }
    if spec == "auto" {
        let strategy = SearchStrategy {
            seed,
            ..SearchStrategy::default()
        };
        return Ok(best_selection(q, &strategy)?);
    }
    if let Some(sel) = explicit_indices(q, spec)? {
        return Ok(from_selection(q, &sel)?);
    }
    if let Some(rest) = spec.strip_prefix("direction=") {
        let (dir, steps) = rest.split_once(':').ok_or_else(|| bad_spec(spec))?;
        let dir: Vec<i64> = parse_list(dir, spec)?;
        let steps: usize = steps.trim().parse().map_err(|_| bad_spec(spec))?;
        if dir.len() != 3 {
            return Err(bad_spec(spec).into());
        }
        let dir: Vec<Rational> = dir.into_iter().map(rat).collect();
        return Ok(line_shelling(q, &dir, steps)?);
    }
    Err(bad_spec(spec).into())
}

/// Selection without the disk requirement, for cohomology queries.
fn any_selection(q: &LatticePolytope, spec: &str, seed: u64) -> Result<FacetSelection> {
    match explicit_indices(q, spec)? {
        Some(sel) => Ok(sel),
        None => Ok(shelling(q, spec, seed)?.selection().clone()),
    }
}

fn emit(c: &Common, text: String, value: Value) -> Result<()> {
    let out = if c.json {
        serde_json::to_string_pretty(&value)? + "\n"
    } else {
        text
    };
    write_out(c, &out)
}

fn write_out(c: &Common, out: &str) -> Result<()> {
    match &c.output {
        Some(path) => fs::write(path, out).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{out}"),
    }
    Ok(())
}

pub fn facets(c: &Common) -> Result<()> {
    let (_, q) = load(c)?;
    let mut text = format!("dimension {}, {} facets\n", q.dim(), q.num_facets());
    let mut list = Vec::new();
    for (i, f) in q.facets().iter().enumerate() {
        let verts: Vec<LatticePoint> = q.facet_vertices(i).into_iter().map(|v| q.vertices()[v].clone()).collect();
        let shown: Vec<String> = verts.iter().map(|v| v.to_string()).collect();
        writeln!(text, "{i}: normal {:?} offset {} vertices {}", f.normal, f.offset, shown.join(" "))?;
        list.push(json!({ "index": i, "normal": f.normal, "offset": f.offset, "vertices": verts }));
    }
    emit(
        c,
        text,
        json!({ "dimension": q.dim(), "lattice_points": q.lattice_points_scaled(1).len(), "facets": list }),
    )
}

pub fn shell(c: &Common) -> Result<()> {
    let (_, q) = load(c)?;
    let sh = shelling(&q, &c.shelling, c.seed)?;
    let pair = EhrhartPair::new(&q, sh.selection())?;
    let mut text = format!(
        "order {:?}\nselection {:?}\nboundary points B_I = {}\npredicted size {}\n",
        sh.order,
        sh.selection().indices(),
        pair.selection_boundary_points,
        pair.predicted_size()
    );
    for step in &sh.certificate {
        writeln!(text, "  facet {} shares {} edge(s)", step.facet, step.shared_edges.len())?;
    }
    emit(
        c,
        text,
        json!({
            "seed": c.seed,
            "order": sh.order,
            "selection": sh.selection().indices(),
            "certificate": sh.certificate,
            "selection_boundary_points": pair.selection_boundary_points,
            "predicted_size": pair.predicted_size(),
        }),
    )
}

pub fn predict_size(c: &Common) -> Result<()> {
    let (_, q) = load(c)?;
    let sh = shelling(&q, &c.shelling, c.seed)?;
    let p = EhrhartPair::new(&q, sh.selection())?;
    let (v, total) = p.resultant_degree();
    let (lo, hi) = p.size_bounds();
    let text = format!(
        "selection {:?}\nsize {}\nV {}\ndegree per polynomial {} (total {})\nbounds {}..{}\np(k) = {}\np_I(k) = {}\n",
        sh.selection().indices(),
        p.predicted_size(),
        v,
        v,
        total,
        lo,
        hi.map(|h| h.to_string()).unwrap_or_else(|| "-".into()),
        p.p,
        p.p_i
    );
    emit(
        c,
        text,
        json!({
            "seed": c.seed,
            "selection": sh.selection().indices(),
            "size": p.predicted_size(),
            "size_from_polynomial": p.size_from_polynomial(),
            "volume": v,
            "degree_total": total,
            "square": p.is_square(),
            "interior_points": p.interior_points,
            "boundary_points": p.boundary_points,
            "selection_boundary_points": p.selection_boundary_points,
            "lower_bound": lo,
            "upper_bound": hi,
            "p": p.p.to_string(),
            "p_I": p.p_i.to_string(),
        }),
    )
}

pub fn build_matrix(c: &Common, dump_tate: bool) -> Result<()> {
    let (_, q) = load(c)?;
    let sh = shelling(&q, &c.shelling, c.seed)?;
    let w = TateWindow::compute(&q, sh.selection())?;
    let m = BracketMatrix::from_window(&w)?;
    let mut out = json!({
        "seed": c.seed,
        "selection": sh.selection().indices(),
        "matrix": m.to_json(),
    });
    if dump_tate {
        out["tate"] = serde_json::to_value(w.dump())?;
    }
    write_out(c, &(serde_json::to_string_pretty(&out)? + "\n"))
}

pub fn evaluate(c: &Common, coeffs: Option<&Path>) -> Result<()> {
    let (_, q) = load(c)?;
    let sh = shelling(&q, &c.shelling, c.seed)?;
    let m = BracketMatrix::build(&q, sh.selection())?;
    let n = m.num_points();
    let system = match coeffs {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            CoefficientSystem::parse(&text, n)?
        }
        None => CoefficientSystem::random(n, &mut ChaCha8Rng::seed_from_u64(c.seed)),
    };
    let det = m.evaluate(&system)?;
    let points: Vec<String> = m.points.iter().map(|p| p.to_string()).collect();
    let text = format!("# seed {}\n# points {}\n{}\n", c.seed, points.join(" "), det);
    emit(
        c,
        text,
        json!({
            "seed": c.seed,
            "points": m.points,
            "size": m.size(),
            "determinant": det.to_string(),
        }),
    )
}

struct Check {
    name: &'static str,
    ok: bool,
    detail: String,
}

pub fn verify(c: &Common, roots: usize) -> Result<()> {
    let (_, q) = load(c)?;
    let sh = shelling(&q, &c.shelling, c.seed)?;
    let sel = sh.selection();
    let mut checks = Vec::new();

    let betti = verify::reduced_cohomology(&q, sel);
    checks.push(Check {
        name: "acyclic_selection",
        ok: betti.iter().all(|&b| b == 0),
        detail: format!("reduced Betti numbers {betti:?}"),
    });

    let pair = EhrhartPair::new(&q, sel)?;
    checks.push(Check {
        name: "ehrhart_square",
        ok: pair.is_square() && pair.predicted_size() == pair.size_from_polynomial(),
        detail: format!("size {} / {}", pair.predicted_size(), pair.size_from_polynomial()),
    });

    let profile = verify::cohomology_profile(&q, sel, -2..=2, None)?;
    let bad: Vec<i64> = profile.entries.iter().filter(|e| !e.middle_vanishes()).map(|e| e.k).collect();
    checks.push(Check {
        name: "middle_cohomology",
        ok: bad.is_empty(),
        detail: format!("nonzero at k = {bad:?}"),
    });

    let w = TateWindow::compute(&q, sel)?;
    checks.push(Check {
        name: "tate_complex",
        ok: w.is_complex(),
        detail: "compositions vanish".into(),
    });
    let m = BracketMatrix::from_window(&w)?;
    checks.push(Check {
        name: "matrix_size",
        ok: m.size() as i64 == pair.predicted_size(),
        detail: format!("{} vs predicted {}", m.size(), pair.predicted_size()),
    });

    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut failures = 0;
    for r in 0..roots {
        let x = verify::random_torus_point(3, &mut rng);
        let system = verify::common_root_system(&m.points, &x, c.seed.wrapping_add(r as u64))?;
        if !m.evaluate(&system)?.is_zero() {
            failures += 1;
        }
    }
    checks.push(Check {
        name: "common_root_vanishing",
        ok: failures == 0,
        detail: format!("{failures} of {roots} systems nonzero"),
    });
    let generic = CoefficientSystem::random(m.num_points(), &mut rng);
    checks.push(Check {
        name: "generic_nonvanishing",
        ok: !m.evaluate(&generic)?.is_zero(),
        detail: "random system".into(),
    });

    let mut text = format!("# seed {}\n", c.seed);
    for ch in &checks {
        writeln!(text, "{} {}: {}", if ch.ok { "PASS" } else { "FAIL" }, ch.name, ch.detail)?;
    }
    let value = json!({
        "seed": c.seed,
        "selection": sel.indices(),
        "checks": checks.iter().map(|ch| json!({ "name": ch.name, "pass": ch.ok, "detail": ch.detail })).collect::<Vec<_>>(),
    });
    emit(c, text, value)?;
    let failed: Vec<&str> = checks.iter().filter(|ch| !ch.ok).map(|ch| ch.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(VerificationFailure(failed.join(", ")).into())
    }
}

fn parse_range(s: &str) -> Result<(i64, i64), Error> {
    let err = || Error::Parse {
        line: 0,
        message: format!("invalid k range `{s}`; expected a..b"),
    };
    let (a, b) = s.split_once("..").ok_or_else(err)?;
    let a: i64 = a.trim().parse().map_err(|_| err())?;
    let b: i64 = b.trim().parse().map_err(|_| err())?;
    if a > b {
        return Err(err());
    }
    Ok((a, b))
}

pub fn cohomology(c: &Common, k_range: &str, radius: Option<i64>) -> Result<()> {
    let (lo, hi) = parse_range(k_range)?;
    let (_, q) = load(c)?;
    let sel = any_selection(&q, &c.shelling, c.seed)?;
    let profile = verify::cohomology_profile(&q, &sel, lo..=hi, radius)?;
    let mut text = format!("selection {:?}\n", sel.indices());
    for e in &profile.entries {
        let dims: Vec<String> = e.dims.iter().map(|d| d.to_string()).collect();
        writeln!(text, "k = {:>3}: h = [{}] (radius {})", e.k, dims.join(", "), e.radius)?;
    }
    emit(c, text, serde_json::to_value(&profile)?)
}

pub fn feasibility(c: &Common) -> Result<()> {
    let (_, q) = load(c)?;
    let (feasible, detail): (bool, Value) = match q.dim() {
        3 => {
            let sh = shelling(&q, &c.shelling, c.seed)?;
            (true, json!({ "selection": sh.selection().indices() }))
        }
        4 => {
            let (ok, witness) = verify::feasibility_dim4(&q)?;
            (ok, json!({ "witness_facet": witness }))
        }
        n if n >= 5 => match explicit_indices(&q, &c.shelling)? {
            Some(sel) => (verify::feasibility_high_dim(&q, &sel)?, json!({ "selection": sel.indices() })),
            None => {
                let found = verify::find_feasible_selection(&q)?;
                let shown = found.as_ref().map(|s| s.indices().to_vec());
                (found.is_some(), json!({ "selection": shown }))
            }
        },
        n => {
            return Err(Error::DimensionInconsistent { expected: 3, found: n }.into());
        }
    };
    let text = format!("dimension {}: {}\n{}\n", q.dim(), if feasible { "feasible" } else { "infeasible" }, detail);
    emit(c, text, json!({ "dimension": q.dim(), "feasible": feasible, "detail": detail }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use resultant_core::geometry::fixtures;

    fn cube() -> LatticePolytope {
        LatticePolytope::from_points(&fixtures::unit_cube()).unwrap()
    }

    #[test]
    fn k_ranges() {
        assert_eq!(parse_range("-2..2").unwrap(), (-2, 2));
        assert_eq!(parse_range(" 1 .. 1").unwrap(), (1, 1));
        assert!(parse_range("2..1").is_err());
        assert!(parse_range("-2").is_err());
    }

    #[test]
    fn shelling_specs() {
        let q = cube();
        assert_eq!(shelling(&q, "indices=0,1,4", 0).unwrap().selection().indices(), &[0, 1, 4]);
        assert_eq!(shelling(&q, "direction=3,5,7:2", 0).unwrap().selection().len(), 2);
        assert!(shelling(&q, "auto", 0).is_ok());
        for bad in ["indices=0,a", "direction=1,2:1", "direction=1,2,3", "everything"] {
            let err = shelling(&q, bad, 0).unwrap_err();
            assert!(matches!(err.downcast_ref::<Error>(), Some(Error::Parse { .. })), "{bad}");
        }
    }

    #[test]
    fn cohomology_accepts_non_disk_selections() {
        let q = cube();
        assert!(shelling(&q, "indices=2,3", 0).is_err());
        assert_eq!(any_selection(&q, "indices=2,3", 0).unwrap().indices(), &[2, 3]);
    }
}
