//! Real-root isolation for small integer polynomials.
//!
//! Polynomials here have coefficients in {-1, 0, 1} and degree below 16, so a
//! fixed-step sign scan followed by bisection is both robust and fast. Factors
//! of `x` and `x - 1` are divided out exactly beforehand, which keeps the
//! scan away from the double roots at 0 and 1 that many difference
//! polynomials carry.

/// Scan step on wide intervals.
pub const SCAN_STEP: f64 = 1e-3;

/// Minimum number of scan cells on narrow intervals.
const MIN_CELLS: usize = 64;

/// Roots closer than this to an interval endpoint count as the endpoint.
pub const EDGE_TOL: f64 = 1e-9;

/// Integer polynomial, coefficients indexed by degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly(pub Vec<i64>);

impl IntPoly {
    pub fn trimmed(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
    }

    /// Removes every factor `x` and `x - 1`; what remains has no root at 0 or 1.
    pub fn deflate_trivial(&self) -> Self {
        let mut c = self.0.clone();
        while c.len() > 1 && c[0] == 0 {
            c.remove(0);
        }
        while c.len() > 1 && c.iter().sum::<i64>() == 0 {
            // synthetic division by (x - 1), highest degree first
            let deg = c.len() - 1;
            let mut q = vec![0i64; deg];
            let mut carry = 0i64;
            for k in (1..=deg).rev() {
                carry += c[k];
                q[k - 1] = carry;
            }
            c = q;
        }
        Self::trimmed(c)
    }
}

/// Bisects a bracketed sign change to full double precision.
fn bisect(p: &IntPoly, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = p.eval(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Real roots of `p` strictly inside `(lo, hi)`, ascending, with roots within
/// [`EDGE_TOL`] of an endpoint dropped. `hi` may be infinite; no polynomial
/// with coefficients in {-1, 0, 1} has a root at or above 2, so the scan
/// stops there.
pub fn roots_in(p: &IntPoly, lo: f64, hi: f64) -> Vec<f64> {
    let q = p.deflate_trivial();
    if q.0.len() <= 1 {
        return Vec::new();
    }
    let top = hi.min(2.0 + 1e-6);
    if top.is_nan() || lo.is_nan() || top <= lo {
        return Vec::new();
    }
    let span = top - lo;
    let cells = ((span / SCAN_STEP).ceil() as usize).max(MIN_CELLS);
    let step = span / cells as f64;
    let mut roots = Vec::new();
    let mut a = lo;
    let mut fa = q.eval(a);
    for i in 1..=cells {
        let b = if i == cells { top } else { lo + step * i as f64 };
        let fb = q.eval(b);
        if fb == 0.0 {
            roots.push(b);
        } else if fa != 0.0 && (fa < 0.0) != (fb < 0.0) {
            roots.push(bisect(&q, a, b, fa));
        }
        a = b;
        fa = fb;
    }
    roots.retain(|&r| r > lo + EDGE_TOL && r < hi - EDGE_TOL);
    roots.dedup_by(|a, b| (*a - *b).abs() < EDGE_TOL);
    roots
}
