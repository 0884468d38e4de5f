//! Bracket substitution of `phi_0` and exact evaluation.
//!
//! A quartic entry `sum c_S e_S` becomes `sum c_S [S]`, where `[i1 i2 i3 i4]` is
//! the 4x4 minor of the coefficient matrix on those columns. Linear rows and
//! columns are copied four times, copy `k` replacing `e_i` by `C_{k,i}`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{mask_indices, ExteriorElement};
use crate::geometry::{FacetSelection, LatticePoint, LatticePolytope};
use crate::linalg::{rat, rational_determinant, Rational};
use crate::tate::TateWindow;

/// One summand of a matrix entry; indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Bracket { coeff: i64, quad: [usize; 4] },
    Coefficient { coeff: i64, poly: usize, point: usize },
}

pub type Entry = Vec<Term>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisLabel {
    pub point: LatticePoint,
    pub dual: bool,
    /// Polynomial copy (1-based) for expanded linear rows and columns.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub copy: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketMatrix {
    pub points: Vec<LatticePoint>,
    pub row_labels: Vec<AxisLabel>,
    pub col_labels: Vec<AxisLabel>,
    /// Size of the bracket block `B`; linear rows and columns follow it.
    pub b_rows: usize,
    pub b_cols: usize,
    pub entries: Vec<Vec<Entry>>,
}

fn integral(c: &Rational, row: usize, col: usize) -> Result<i64> {
    if !c.is_integer() {
        return Err(Error::DegreePatternViolation {
            row,
            col,
            detail: format!("non-integral coefficient {c}"),
        });
    }
    c.to_integer().to_i64().ok_or_else(|| Error::DegreePatternViolation {
        row,
        col,
        detail: format!("coefficient {c} out of range"),
    })
}

/// `sum c_S e_S` with `|S| = 4` as bracket terms.
pub fn quartic_to_brackets(x: &ExteriorElement, row: usize, col: usize) -> Result<Entry> {
    x.terms()
        .iter()
        .map(|(m, c)| {
            let idx = mask_indices(*m);
            if idx.len() != 4 {
                return Err(Error::DegreePatternViolation {
                    row,
                    col,
                    detail: format!("expected a quartic entry, found degree {}", -(idx.len() as i64)),
                });
            }
            Ok(Term::Bracket {
                coeff: integral(c, row, col)?,
                quad: [idx[0], idx[1], idx[2], idx[3]],
            })
        })
        .collect()
}

/// Copy `poly` of a linear entry `sum c_i e_i`.
pub fn linear_to_coefficients(x: &ExteriorElement, poly: usize, row: usize, col: usize) -> Result<Entry> {
    x.terms()
        .iter()
        .map(|(m, c)| {
            if m.count_ones() != 1 {
                return Err(Error::DegreePatternViolation {
                    row,
                    col,
                    detail: format!("expected a linear entry, found degree {}", -(m.count_ones() as i64)),
                });
            }
            Ok(Term::Coefficient {
                coeff: integral(c, row, col)?,
                poly,
                point: m.trailing_zeros() as usize,
            })
        })
        .collect()
}

impl BracketMatrix {
    /// Compute the Tate window for `sel` and substitute.
    pub fn build(q: &LatticePolytope, sel: &FacetSelection) -> Result<BracketMatrix> {
        Self::from_window(&TateWindow::compute(q, sel)?)
    }

    /// Apply `U_4` to the `phi_0` of a Tate window.
    pub fn from_window(w: &TateWindow) -> Result<BracketMatrix> {
        let b_row_gens = w.t0.in_degree(0);
        let l_row_gens = w.t0.in_degree(-3);
        let b_col_gens = w.t_minus1.in_degree(-4);
        let l_col_gens = w.t_minus1.in_degree(-1);

        // (generator, copy) per axis position
        let rows: Vec<(usize, Option<usize>)> = b_row_gens
            .iter()
            .map(|&g| (g, None))
            .chain(l_row_gens.iter().flat_map(|&g| (0..4).map(move |k| (g, Some(k)))))
            .collect();
        let cols: Vec<(usize, Option<usize>)> = b_col_gens
            .iter()
            .map(|&g| (g, None))
            .chain(l_col_gens.iter().flat_map(|&g| (0..4).map(move |k| (g, Some(k)))))
            .collect();
        if rows.len() != cols.len() {
            return Err(Error::Shape(format!("{} rows but {} columns", rows.len(), cols.len())));
        }

        let mut entries = vec![vec![Entry::new(); cols.len()]; rows.len()];
        for (r, &(i, rk)) in rows.iter().enumerate() {
            for (c, &(j, ck)) in cols.iter().enumerate() {
                let x = w.phi0.entry(i, j);
                if x.is_zero() {
                    continue;
                }
                entries[r][c] = match (rk, ck) {
                    (None, None) => quartic_to_brackets(&x, r, c)?,
                    (None, Some(k)) | (Some(k), None) => linear_to_coefficients(&x, k, r, c)?,
                    (Some(_), Some(_)) => {
                        return Err(Error::DegreePatternViolation {
                            row: r,
                            col: c,
                            detail: "nonzero entry in the zero block".into(),
                        })
                    }
                };
            }
        }
        let label = |m: &crate::tate::LabeledModule, (g, k): (usize, Option<usize>)| AxisLabel {
            point: m.labels[g].point.clone(),
            dual: m.labels[g].dual,
            copy: k.map(|k| k + 1),
        };
        Ok(BracketMatrix {
            points: w.points.clone(),
            row_labels: rows.iter().map(|&p| label(&w.t0, p)).collect(),
            col_labels: cols.iter().map(|&p| label(&w.t_minus1, p)).collect(),
            b_rows: b_row_gens.len(),
            b_cols: b_col_gens.len(),
            entries,
        })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    /// `(rows, cols)` of B, L, L-tilde and the zero block.
    pub fn block_shapes(&self) -> [(usize, usize); 4] {
        let n = self.size();
        [
            (self.b_rows, self.b_cols),
            (self.b_rows, n - self.b_cols),
            (n - self.b_rows, self.b_cols),
            (n - self.b_rows, n - self.b_cols),
        ]
    }

    pub fn evaluate(&self, c: &CoefficientSystem) -> Result<Rational> {
        evaluate_entries(&self.entries, c)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(MatrixJson::from(self)).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<BracketMatrix> {
        let m: MatrixJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        m.into_matrix()
    }
}

/// Exact determinant of an entry matrix after substitution.
pub fn evaluate_entries(entries: &[Vec<Entry>], c: &CoefficientSystem) -> Result<Rational> {
    let mut cache: HashMap<[usize; 4], Rational> = HashMap::new();
    let n = c.num_points();
    let mut numeric = Vec::with_capacity(entries.len());
    for row in entries {
        if row.len() != entries.len() {
            return Err(Error::Shape("matrix is not square".into()));
        }
        let mut out = Vec::with_capacity(row.len());
        for entry in row {
            let mut acc = Rational::zero();
            for t in entry {
                match t {
                    Term::Bracket { coeff, quad } => {
                        if quad.iter().any(|&i| i >= n) {
                            return Err(Error::Shape(format!("bracket index out of range in {quad:?}")));
                        }
                        let v = cache.entry(*quad).or_insert_with(|| bracket_value(quad, c));
                        acc += &*v * rat(*coeff);
                    }
                    Term::Coefficient { coeff, poly, point } => {
                        if *poly >= 4 || *point >= n {
                            return Err(Error::Shape(format!("coefficient C[{poly}][{point}] out of range")));
                        }
                        acc += &c.rows[*poly][*point] * rat(*coeff);
                    }
                }
            }
            out.push(acc);
        }
        numeric.push(out);
    }
    Ok(rational_determinant(&numeric))
}

/// The 4x4 minor of `C` on columns `quad`.
pub fn bracket_value(quad: &[usize; 4], c: &CoefficientSystem) -> Rational {
    let m: Vec<Vec<Rational>> = c.rows.iter().map(|r| quad.iter().map(|&i| r[i].clone()).collect()).collect();
    rational_determinant(&m)
}

/// The coefficients `C_{k,i}` of four Laurent polynomials on a common support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientSystem {
    pub rows: Vec<Vec<Rational>>,
}

impl CoefficientSystem {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        if rows.len() != 4 {
            return Err(Error::Shape(format!("expected 4 coefficient rows, found {}", rows.len())));
        }
        let n = rows[0].len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("coefficient rows differ in length".into()));
        }
        Ok(CoefficientSystem { rows })
    }

    pub fn num_points(&self) -> usize {
        self.rows[0].len()
    }

    /// Random rationals `p/q` with `|p| <= 30`, `1 <= q <= 5`.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        let rows = (0..4)
            .map(|_| {
                (0..n)
                    .map(|_| Rational::new(BigInt::from(rng.gen_range(-30..=30)), BigInt::from(rng.gen_range(1..=5))))
                    .collect()
            })
            .collect();
        CoefficientSystem { rows }
    }

    /// Four lines of `n` whitespace-separated rationals.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<Rational>().map_err(|_| Error::Parse {
                        line: lineno + 1,
                        message: format!("not a rational number: {tok}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != n {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("expected {n} coefficients, found {}", row.len()),
                });
            }
            rows.push(row);
        }
        if rows.len() != 4 {
            return Err(Error::Parse {
                line: text.lines().count(),
                message: format!("expected 4 coefficient rows, found {}", rows.len()),
            });
        }
        Ok(CoefficientSystem { rows })
    }

    pub fn format(&self) -> String {
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ") + "\n")
            .collect()
    }

    pub fn scale_row(&self, k: usize, f: &Rational) -> Self {
        let mut out = self.clone();
        for x in &mut out.rows[k] {
            *x *= f;
        }
        out
    }

    pub fn permute_rows(&self, perm: &[usize; 4]) -> Self {
        CoefficientSystem {
            rows: perm.iter().map(|&k| self.rows[k].clone()).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TermJson {
    Bracket {
        sign: i8,
        quad: [usize; 4],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mult: Option<u64>,
    },
    Coefficient {
        sign: i8,
        poly_index: usize,
        point_index: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mult: Option<u64>,
    },
}

fn split(coeff: i64) -> (i8, Option<u64>) {
    let sign = if coeff < 0 { -1 } else { 1 };
    let mult = coeff.unsigned_abs();
    (sign, (mult != 1).then_some(mult))
}

fn join(sign: i8, mult: Option<u64>) -> Result<i64> {
    if sign != 1 && sign != -1 {
        return Err(Error::Parse {
            line: 0,
            message: format!("sign must be 1 or -1, found {sign}"),
        });
    }
    let m = i64::try_from(mult.unwrap_or(1)).map_err(|_| Error::Parse {
        line: 0,
        message: "multiplicity out of range".into(),
    })?;
    Ok(sign as i64 * m)
}

impl From<&Term> for TermJson {
    fn from(t: &Term) -> Self {
        match t {
            Term::Bracket { coeff, quad } => {
                let (sign, mult) = split(*coeff);
                TermJson::Bracket {
                    sign,
                    quad: quad.map(|i| i + 1),
                    mult,
                }
            }
            Term::Coefficient { coeff, poly, point } => {
                let (sign, mult) = split(*coeff);
                TermJson::Coefficient {
                    sign,
                    poly_index: poly + 1,
                    point_index: point + 1,
                    mult,
                }
            }
        }
    }
}

impl TermJson {
    fn into_term(self) -> Result<Term> {
        let bad = |what: &str| Error::Parse {
            line: 0,
            message: format!("{what} must be 1-based"),
        };
        Ok(match self {
            TermJson::Bracket { sign, quad, mult } => {
                if quad.contains(&0) {
                    return Err(bad("bracket index"));
                }
                if !quad.windows(2).all(|w| w[0] < w[1]) {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("bracket {quad:?} is not strictly increasing"),
                    });
                }
                Term::Bracket {
                    coeff: join(sign, mult)?,
                    quad: quad.map(|i| i - 1),
                }
            }
            TermJson::Coefficient {
                sign,
                poly_index,
                point_index,
                mult,
            } => {
                if poly_index == 0 || point_index == 0 {
                    return Err(bad("coefficient index"));
                }
                Term::Coefficient {
                    coeff: join(sign, mult)?,
                    poly: poly_index - 1,
                    point: point_index - 1,
                }
            }
        })
    }
}

#[derive(Serialize, Deserialize)]
struct ZeroBlock {
    rows: usize,
    cols: usize,
}

#[derive(Serialize, Deserialize)]
struct BlocksJson {
    #[serde(rename = "B")]
    b: Vec<Vec<Vec<TermJson>>>,
    #[serde(rename = "L")]
    l: Vec<Vec<Vec<TermJson>>>,
    #[serde(rename = "Ltilde")]
    ltilde: Vec<Vec<Vec<TermJson>>>,
    #[serde(rename = "Zero")]
    zero: ZeroBlock,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    size: usize,
    points: Vec<LatticePoint>,
    rows: Vec<AxisLabel>,
    cols: Vec<AxisLabel>,
    blocks: BlocksJson,
}

impl From<&BracketMatrix> for MatrixJson {
    fn from(m: &BracketMatrix) -> Self {
        let block = |rows: std::ops::Range<usize>, cols: std::ops::Range<usize>| {
            rows.map(|r| m.entries[r][cols.clone()].iter().map(|e| e.iter().map(TermJson::from).collect()).collect())
                .collect()
        };
        let n = m.size();
        MatrixJson {
            size: n,
            points: m.points.clone(),
            rows: m.row_labels.clone(),
            cols: m.col_labels.clone(),
            blocks: BlocksJson {
                b: block(0..m.b_rows, 0..m.b_cols),
                l: block(0..m.b_rows, m.b_cols..n),
                ltilde: block(m.b_rows..n, 0..m.b_cols),
                zero: ZeroBlock {
                    rows: n - m.b_rows,
                    cols: n - m.b_cols,
                },
            },
        }
    }
}

impl MatrixJson {
    fn into_matrix(self) -> Result<BracketMatrix> {
        let n = self.size;
        let b_rows = self.blocks.b.len();
        let b_cols = n - self.blocks.zero.cols.min(n);
        let shape_ok = self.rows.len() == n
            && self.cols.len() == n
            && self.blocks.zero.rows == n - b_rows
            && self.blocks.l.len() == b_rows
            && self.blocks.ltilde.len() == n - b_rows
            && self.blocks.b.iter().all(|r| r.len() == b_cols)
            && self.blocks.l.iter().all(|r| r.len() == n - b_cols)
            && self.blocks.ltilde.iter().all(|r| r.len() == b_cols);
        if !shape_ok {
            return Err(Error::Parse {
                line: 0,
                message: "block shapes are inconsistent".into(),
            });
        }
        let convert = |row: Vec<Vec<TermJson>>| -> Result<Vec<Entry>> {
            row.into_iter().map(|e| e.into_iter().map(TermJson::into_term).collect()).collect()
        };
        let mut entries = Vec::with_capacity(n);
        for (b, l) in self.blocks.b.into_iter().zip(self.blocks.l) {
            let mut row = convert(b)?;
            row.extend(convert(l)?);
            entries.push(row);
        }
        for lt in self.blocks.ltilde {
            let mut row = convert(lt)?;
            row.extend(vec![Entry::new(); n - b_cols]);
            entries.push(row);
        }
        Ok(BracketMatrix {
            points: self.points,
            row_labels: self.rows,
            col_labels: self.cols,
            b_rows,
            b_cols,
            entries,
        })
    }
}

/// Render one entry in bracket notation, e.g. `[1236]-[1245]` or `-C_{2,5}`.
pub fn format_entry(e: &Entry) -> String {
    if e.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (pos, t) in e.iter().enumerate() {
        let (coeff, body) = match t {
            Term::Bracket { coeff, quad } => (
                *coeff,
                format!("[{}]", quad.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")),
            ),
            Term::Coefficient { coeff, poly, point } => (*coeff, format!("C_{{{},{}}}", poly + 1, point + 1)),
        };
        let sign = if coeff < 0 {
            "-"
        } else if pos > 0 {
            "+"
        } else {
            ""
        };
        let mult = if coeff.abs() != 1 {
            coeff.abs().to_string()
        } else {
            String::new()
        };
        out.push_str(&format!("{sign}{mult}{body}"));
    }
    out
}

/// Sign of `a / b` for nonzero rationals with `|a| = |b|`, or `None`.
pub fn ratio_sign(a: &Rational, b: &Rational) -> Option<i32> {
    if b.is_zero() {
        return None;
    }
    let r = a / b;
    if r.is_one() {
        Some(1)
    } else if (-r).is_one() {
        Some(-1)
    } else {
        None
    }
}

impl std::fmt::Display for BracketMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(format_entry).collect();
            writeln!(f, "{}", cells.join("  "))?;
        }
        Ok(())
    }
}
