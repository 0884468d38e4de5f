//! Ehrhart polynomials of `Q` and of `Q` with a facet union removed, and the
//! matrix size and degree predictions derived from them.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{FacetSelection, LatticePolytope};
use crate::linalg::{rat, Rational};

/// Polynomial with exact rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<Rational>);

impl Poly {
    pub fn eval(&self, k: i64) -> Rational {
        let x = rat(k);
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * &x + c)
    }

    /// Integer value at `k`; Ehrhart polynomials are integer valued.
    pub fn eval_int(&self, k: i64) -> i64 {
        let v = self.eval(k);
        assert!(v.is_integer(), "polynomial is not integer valued at {k}");
        v.to_integer().to_i64().expect("fits in i64")
    }

    pub fn leading(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly((0..n)
            .map(|i| {
                self.0.get(i).cloned().unwrap_or_else(Rational::zero) - other.0.get(i).cloned().unwrap_or_else(Rational::zero)
            })
            .collect())
    }

    /// Degree-`d` interpolant through `(k, values[k])` for `k = 0..=d`,
    /// via forward differences and the binomial basis.
    pub fn interpolate(values: &[i64]) -> Poly {
        let d = values.len() - 1;
        let mut diffs: Vec<Rational> = Vec::with_capacity(d + 1);
        let mut row: Vec<Rational> = values.iter().map(|&v| rat(v)).collect();
        for _ in 0..=d {
            diffs.push(row[0].clone());
            row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        // sum_j diffs[j] * C(x, j), expanding C(x, j) = x(x-1)...(x-j+1)/j!
        let mut coeffs = vec![Rational::zero(); d + 1];
        let mut falling = vec![Rational::one()];
        let mut fact = BigInt::one();
        for (j, dj) in diffs.iter().enumerate() {
            if j > 0 {
                fact *= j;
                let mut next = vec![Rational::zero(); falling.len() + 1];
                for (i, c) in falling.iter().enumerate() {
                    next[i + 1] += c;
                    next[i] -= c * rat(j as i64 - 1);
                }
                falling = next;
            }
            for (i, c) in falling.iter().enumerate() {
                coeffs[i] += dj * c / Rational::from_integer(fact.clone());
            }
        }
        Poly(coeffs)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        write!(f, "k")?
                    } else {
                        write!(f, "k^{i}")?
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

/// Euler characteristic of the union of the selected facets, from face counts.
pub fn euler_characteristic(q: &LatticePolytope, sel: &FacetSelection) -> i64 {
    let mut chi = 0i64;
    for d in 0..q.dim() {
        let count = q.faces(d).iter().filter(|f| f.facets.iter().any(|&i| sel.contains(i))).count() as i64;
        chi += if d % 2 == 0 { count } else { -count };
    }
    chi
}

#[derive(Clone, Debug, Serialize)]
pub struct EhrhartPair {
    pub dim: usize,
    /// `p(k) = #l(kQ)`.
    pub p: Poly,
    /// `p_I(k) = #l(kQ - D_I)`.
    pub p_i: Poly,
    pub euler: i64,
    /// Normalized volume.
    pub volume: i64,
    pub interior_points: i64,
    pub boundary_points: i64,
    pub selection_boundary_points: i64,
}

fn check(k: i64, expected: &Rational, found: usize) -> Result<()> {
    if *expected != rat(found as i64) {
        return Err(Error::InterpolationMismatch {
            k,
            expected: expected.to_string(),
            found: found.to_string(),
        });
    }
    Ok(())
}

impl EhrhartPair {
    /// Interpolates both polynomials from direct counts and verifies them at an
    /// extra node and through reciprocity at `k = 1, 2`.
    pub fn new(q: &LatticePolytope, sel: &FacetSelection) -> Result<Self> {
        let n = q.dim();
        let comp = sel.complement();
        let mut counts = vec![1i64];
        counts.extend((1..=n as i64).map(|k| q.lattice_points_scaled(k).len() as i64));
        let p = Poly::interpolate(&counts);

        let euler = if sel.is_empty() { 0 } else { euler_characteristic(q, sel) };
        let mut counts_i = vec![1 - euler];
        counts_i.extend((1..=n as i64).map(|k| q.points_off_facets(k, sel).len() as i64));
        let p_i = Poly::interpolate(&counts_i);

        let extra = n as i64 + 1;
        check(extra, &p.eval(extra), q.lattice_points_scaled(extra).len())?;
        check(extra, &p_i.eval(extra), q.points_off_facets(extra, sel).len())?;
        let sign = if n.is_multiple_of(2) { rat(1) } else { rat(-1) };
        for k in 1..=2 {
            check(-k, &(&sign * p.eval(-k)), q.interior_points(k).len())?;
            check(-k, &(&sign * p_i.eval(-k)), q.points_off_facets(k, &comp).len())?;
        }

        let volume = (p.leading() * Rational::from_integer((1..=n as i64).product::<i64>().into()))
            .to_integer()
            .to_i64()
            .expect("volume fits");
        let interior_points = (&sign * p.eval(-1)).to_integer().to_i64().unwrap();
        let boundary_points = p.eval_int(1) - interior_points;
        let q_i = p.sub(&p_i);
        // relative interior points of |D_I| are (-1)^(n-1) q_I(-1)
        let selection_boundary_points = q_i.eval_int(1) + sign.to_integer().to_i64().unwrap() * q_i.eval_int(-1);
        Ok(EhrhartPair {
            dim: n,
            p,
            p_i,
            euler,
            volume,
            interior_points,
            boundary_points,
            selection_boundary_points,
        })
    }

    /// `q_I = p - p_I`, counting points on the selected facets.
    pub fn facet_union_poly(&self) -> Poly {
        self.p.sub(&self.p_i)
    }

    /// `V + 3(B_Q - B_I) + 6 i_Q`.
    pub fn predicted_size(&self) -> i64 {
        self.volume + 3 * (self.boundary_points - self.selection_boundary_points) + 6 * self.interior_points
    }

    /// `p_I(2) - 4 p_I(-1)`, the row count of the matrix read off the polynomial.
    pub fn size_from_polynomial(&self) -> i64 {
        self.p_i.eval_int(2) - 4 * self.p_i.eval_int(-1)
    }

    pub fn fourth_difference(&self) -> Rational {
        let f = |k| self.p_i.eval(k);
        f(2) - rat(4) * f(1) + rat(6) * f(0) - rat(4) * f(-1) + f(-2)
    }

    pub fn is_square(&self) -> bool {
        self.fourth_difference().is_zero()
    }

    /// Degree of the resultant in each polynomial's coefficients, and in total.
    pub fn resultant_degree(&self) -> (i64, i64) {
        (self.volume, (self.dim as i64 + 1) * self.volume)
    }

    /// Lower bound `V` on the matrix size, and the `3V` ceiling reported when `Q`
    /// has interior points.
    pub fn size_bounds(&self) -> (i64, Option<i64>) {
        (self.volume, (self.interior_points >= 1).then_some(3 * self.volume))
    }
}
