#![allow(dead_code)]

use resultant_core::bracket::{Entry, Term};
use resultant_core::geometry::{fixtures, FacetSelection, LatticePolytope};

/// Published reference matrix for the multilinear cube, strip {x=0, x=1, y=0}.
/// Point order 1, x, y, z, xy, xz, yz, xyz.
pub const REFERENCE_CUBE: [[&str; 6]; 6] = [
    ["[1234]", "[1236]-[1245]", "[1237]", "[1256]", "[1238]+[1257]", "[1258]"],
    ["[1346]-[1247]", "[2346]-[1248]-[1267]-[1456]", "[2347]-[1367]", "-[2456]-[1268]", "[2348]-[1368]-[1567]-[2457]", "-[1568]-[2458]"],
    ["[1345]", "[2345]-[1356]", "-[1357]", "-[2356]", "-[2357]-[1358]", "-[2358]"],
    ["[1467]", "[2467]+[1468]", "[3467]", "[2468]", "[3468]-[4567]", "-[4568]"],
    ["[1457]+[1348]", "[1368]+[2348]+[2457]-[1567]", "[1378]-[3457]", "[2368]-[2567]", "[1578]+[2378]+[3458]-[3567]", "[2578]-[3568]"],
    ["-[1478]", "-[1678]-[2478]", "-[3478]", "-[2678]", "[4578]-[3678]", "[5678]"],
];

/// Position of the reference cube monomials in lexicographic point order.
pub const CUBE_INDEX: [usize; 8] = [0, 4, 2, 1, 6, 5, 3, 7];

/// Published reference matrix for the octahedron, as printed (with `C_{43}3` read as `C_{43}`).
/// Point order 1, x, y, z, 1/x, 1/y, 1/z.
pub const REFERENCE_OCTAHEDRON: [&str; 14] = [
    "0 0 0 0 0 0 0 [2345] [2346] [2347] C_{11} C_{21} C_{31} C_{41}",
    "0 0 0 0 0 0 0 0 0 0 C_{12} C_{22} C_{32} C_{42}",
    "0 0 0 0 0 0 0 0 0 0 C_{13} C_{23} C_{33} C_{43}",
    "0 0 0 0 0 0 0 0 0 0 C_{14} C_{24} C_{34} C_{44}",
    "0 -[2356] -[2357] 0 0 0 0 [1235] 0 0 C_{15} C_{25} C_{35} C_{45}",
    "0 -[2456] 0 [2467] 0 0 0 0 -[1246] 0 C_{16} C_{26} C_{36} C_{46}",
    "0 0 [3457] [3467] 0 0 0 0 0 [1347] C_{17} C_{27} C_{37} C_{47}",
    "-[2567] [1256] 0 0 0 0 0 -[2356] -[2456] 0 0 0 0 0",
    "-[3567] 0 -[1357] 0 0 0 0 -[2357] 0 [3457] 0 0 0 0",
    "-[4567] 0 0 [1467] 0 0 0 0 [2467] [2467] 0 0 0 0",
    "C_{11} C_{12} C_{13} C_{14} C_{15} C_{16} C_{17} 0 0 0 0 0 0 0",
    "C_{21} C_{22} C_{23} C_{24} C_{25} C_{26} C_{27} 0 0 0 0 0 0 0",
    "C_{31} C_{32} C_{33} C_{34} C_{35} C_{36} C_{37} 0 0 0 0 0 0 0",
    "C_{41} C_{42} C_{43} C_{44} C_{45} C_{46} C_{47} 0 0 0 0 0 0 0",
];

pub const OCTA_INDEX: [usize; 7] = [3, 6, 5, 4, 0, 1, 2];

/// Parse a cell such as `[1236]-[1245]`, `-C_{21}` or `0`; reference indices are
/// 1-based and mapped through `index`.
pub fn parse_cell(cell: &str, index: &[usize]) -> Entry {
    let mut out = Vec::new();
    let s = cell.trim();
    if s == "0" {
        return out;
    }
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let mut sign = 1;
        while chars[i] == '+' || chars[i] == '-' {
            if chars[i] == '-' {
                sign = -sign;
            }
            i += 1;
        }
        if chars[i] == '[' {
            let digits: Vec<usize> = chars[i + 1..i + 5].iter().map(|c| c.to_digit(10).unwrap() as usize).collect();
            assert_eq!(chars[i + 5], ']');
            let mut cols: Vec<usize> = digits.iter().map(|d| index[d - 1]).collect();
            // sort the mapped columns, tracking the permutation sign
            for a in 0..4 {
                for b in 0..3 - a {
                    if cols[b] > cols[b + 1] {
                        cols.swap(b, b + 1);
                        sign = -sign;
                    }
                }
            }
            out.push(Term::Bracket {
                coeff: sign,
                quad: [cols[0], cols[1], cols[2], cols[3]],
            });
            i += 6;
        } else {
            assert_eq!(&s[i..i + 3], "C_{");
            let k = chars[i + 3].to_digit(10).unwrap() as usize;
            let p = chars[i + 4].to_digit(10).unwrap() as usize;
            assert_eq!(chars[i + 5], '}');
            out.push(Term::Coefficient {
                coeff: sign,
                poly: k - 1,
                point: index[p - 1],
            });
            i += 6;
        }
    }
    out
}

pub fn reference_cube() -> Vec<Vec<Entry>> {
    REFERENCE_CUBE.iter().map(|r| r.iter().map(|c| parse_cell(c, &CUBE_INDEX)).collect()).collect()
}

pub fn reference_octahedron() -> Vec<Vec<Entry>> {
    REFERENCE_OCTAHEDRON
        .iter()
        .map(|r| r.split_whitespace().map(|c| parse_cell(c, &OCTA_INDEX)).collect())
        .collect()
}

fn select(q: &LatticePolytope, pred: impl Fn(&[i64], i64) -> bool) -> FacetSelection {
    let idx: Vec<usize> = (0..q.num_facets())
        .filter(|&i| pred(&q.facets()[i].normal, q.facets()[i].offset))
        .collect();
    FacetSelection::proper(q, &idx).unwrap()
}

pub fn cube() -> LatticePolytope {
    LatticePolytope::from_points(&fixtures::unit_cube()).unwrap()
}

pub fn octahedron() -> LatticePolytope {
    LatticePolytope::from_points(&fixtures::octahedron()).unwrap()
}

/// {x=0, x=1, y=0}
pub fn cube_strip(q: &LatticePolytope) -> FacetSelection {
    select(q, |n, a| n[0] != 0 || (n[1] == 1 && a == 0))
}

/// {z=0, z=1}
pub fn cube_top_bottom(q: &LatticePolytope) -> FacetSelection {
    select(q, |n, _| n[2] != 0)
}

/// {x=0, y=0, z=1}
pub fn cube_corner(q: &LatticePolytope) -> FacetSelection {
    select(q, |n, a| ((n[0] == 1 || n[1] == 1) && a == 0) || n[2] == -1)
}

/// The facet x+y+z=1 and its three edge neighbours.
pub fn octa_disk(q: &LatticePolytope) -> FacetSelection {
    select(q, |n, _| n.iter().filter(|&&c| c > 0).count() <= 1)
}

/// x+y+z=1 and x-y-z=1, which meet only in the vertex e_1.
pub fn octa_point_pair(q: &LatticePolytope) -> FacetSelection {
    select(q, |n, _| n == [-1, -1, -1] || n == [-1, 1, 1])
}

/// A polytope of the random corpus with the selection the search picked.
pub struct Instance {
    pub seed: u64,
    pub q: LatticePolytope,
    pub sel: FacetSelection,
}

/// Random full-dimensional lattice polytopes with vertices in [0,3]^3, at most
/// `max_points` lattice points, and a certified disk selection.
pub fn corpus(count: usize, max_points: usize) -> Vec<Instance> {
    use rand::{Rng, SeedableRng};
    use resultant_core::geometry::LatticePoint;
    use resultant_core::shelling::{best_selection, SearchStrategy};

    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < count {
        seed += 1;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(4..=7);
        let pts: Vec<LatticePoint> = (0..n).map(|_| LatticePoint((0..3).map(|_| rng.gen_range(0..=3)).collect())).collect();
        let Ok(q) = LatticePolytope::from_points(&pts) else { continue };
        if q.dim() != 3 || q.lattice_points_scaled(1).len() > max_points {
            continue;
        }
        let Ok(sh) = best_selection(&q, &SearchStrategy { seed, ..Default::default() }) else { continue };
        out.push(Instance {
            seed,
            sel: sh.selection().clone(),
            q,
        });
    }
    out
}

/// Brute-force count of lattice points of kQ lying on none of the facets in
/// `off`, by scanning the bounding box of kQ (k >= 1).
pub fn count_points(q: &LatticePolytope, k: i64, off: &FacetSelection) -> usize {
    assert!(k >= 1);
    let lo: Vec<i64> = (0..3).map(|c| q.vertices().iter().map(|v| v.0[c]).min().unwrap() * k).collect();
    let hi: Vec<i64> = (0..3).map(|c| q.vertices().iter().map(|v| v.0[c]).max().unwrap() * k).collect();
    let mut n = 0;
    for x in lo[0]..=hi[0] {
        for y in lo[1]..=hi[1] {
            for z in lo[2]..=hi[2] {
                let m = [x, y, z];
                let ok = q.facets().iter().enumerate().all(|(i, f)| {
                    let s: i64 = f.normal.iter().zip(&m).map(|(a, b)| a * b).sum::<i64>() + k * f.offset;
                    s > 0 || (s == 0 && !off.contains(i))
                });
                n += ok as usize;
            }
        }
    }
    n
}
