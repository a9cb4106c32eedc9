//! Oscillatory semi-infinite integrals `int_a^inf envelope(x) K(omega x) dx`
//! by integration between consecutive zeros of the kernel followed by Wynn's
//! epsilon acceleration of the partial sums.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::quadrature::{integrate_adaptive, IntegralResult, QuadratureSpec};
use super::special::{bessel_j, bessel_j_zero, BesselOrder};
use crate::error::{Error, Result};

/// The oscillating factor of the integrand.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum OscillatoryKernel {
    Cos { omega: f64 },
    Sin { omega: f64 },
    Bessel { order: BesselOrder, omega: f64 },
}

impl OscillatoryKernel {
    pub fn omega(&self) -> f64 {
        match *self {
            OscillatoryKernel::Cos { omega }
            | OscillatoryKernel::Sin { omega }
            | OscillatoryKernel::Bessel { omega, .. } => omega,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            OscillatoryKernel::Cos { omega } => (omega * x).cos(),
            OscillatoryKernel::Sin { omega } => (omega * x).sin(),
            OscillatoryKernel::Bessel { order, omega } => {
                bessel_j(order, omega * x).unwrap_or(f64::NAN)
            }
        }
    }

    /// The `m`-th positive zero (`m >= 1`) of the kernel as a function of `x`.
    fn zero(&self, m: u32) -> Result<f64> {
        let m_f = f64::from(m);
        Ok(match *self {
            OscillatoryKernel::Cos { omega } => ((m_f - 1.0) * PI + FRAC_PI_2) / omega,
            OscillatoryKernel::Sin { omega } => m_f * PI / omega,
            OscillatoryKernel::Bessel { order, omega } => bessel_j_zero(order, m)? / omega,
        })
    }

    /// Index of the first zero strictly greater than `a`.
    fn first_zero_after(&self, a: f64) -> Result<u32> {
        let omega = self.omega();
        // Zeros are asymptotically pi/omega apart; start a little early and walk.
        let guess = ((a * omega / PI) - 2.0).floor().max(1.0) as u32;
        let mut m = guess.max(1);
        while self.zero(m)? <= a {
            m += 1;
        }
        while m > 1 && self.zero(m - 1)? > a {
            m -= 1;
        }
        Ok(m)
    }
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums; returns the
/// highest even-column estimate.
fn wynn_epsilon(sums: &[f64]) -> f64 {
    let n = sums.len();
    if n < 3 {
        return *sums.last().unwrap_or(&0.0);
    }
    // prev holds column k-1, cur column k (eps_{-1} = 0, eps_0 = sums).
    let mut prev = vec![0.0; n + 1];
    let mut cur: Vec<f64> = sums.to_vec();
    let mut best = sums[n - 1];
    let mut column = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            let inv = if diff == 0.0 {
                f64::INFINITY
            } else {
                1.0 / diff
            };
            next.push(prev[i + 1] + inv);
        }
        column += 1;
        prev = cur;
        cur = next;
        if column % 2 == 0 {
            match cur.last() {
                Some(v) if v.is_finite() => best = *v,
                _ => break,
            }
        }
        if cur.iter().any(|v| !v.is_finite()) {
            break;
        }
    }
    best
}

/// `int_a^inf envelope(x) * kernel(x) dx` for an eventually monotone decaying
/// envelope.
///
/// Cells between consecutive kernel zeros are integrated adaptively; the
/// partial sums are accelerated with the epsilon algorithm. If the cells die
/// out on their own the plain sum is returned.
pub fn integrate_oscillatory<F: Fn(f64) -> f64>(
    envelope: F,
    kernel: OscillatoryKernel,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<f64>> {
    spec.validate()?;
    let omega = kernel.omega();
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!(
            "kernel frequency must be positive, got {omega}"
        )));
    }
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!(
            "lower bound must be finite and >= 0, got {a}"
        )));
    }
    let integrand = |x: f64| {
        let e = envelope(x);
        if e == 0.0 {
            0.0
        } else {
            e * kernel.eval(x)
        }
    };
    let cell_spec = spec.scaled(0.1);
    let mut m = kernel.first_zero_after(a)?;
    let mut lo = a;
    let mut sum = 0.0;
    let mut sum_error = 0.0;
    let mut evaluations = 0;
    let mut all_converged = true;
    let mut sums = Vec::new();
    let mut estimates: Vec<f64> = Vec::new();
    let mut quiet = 0;
    const WINDOW: usize = 40;
    for _ in 0..spec.max_oscillation_cells {
        let hi = kernel.zero(m)?;
        m += 1;
        let cell = integrate_adaptive(&integrand, lo, hi, &cell_spec)?;
        evaluations += cell.evaluations;
        all_converged &= cell.converged;
        sum += cell.value;
        sum_error += cell.error_estimate;
        lo = hi;
        if !sum.is_finite() {
            return Ok(IntegralResult {
                value: sum,
                error_estimate: f64::INFINITY,
                converged: false,
                evaluations,
            });
        }
        let tol = spec.tolerance_for(sum.abs());
        quiet = if cell.value.abs() + cell.error_estimate <= 0.1 * tol {
            quiet + 1
        } else {
            0
        };
        if quiet >= 3 {
            let converged = all_converged && sum_error <= tol;
            return Ok(IntegralResult {
                value: sum,
                error_estimate: sum_error,
                converged,
                evaluations,
            });
        }
        sums.push(sum);
        let start = sums.len().saturating_sub(WINDOW);
        let estimate = wynn_epsilon(&sums[start..]);
        estimates.push(estimate);
        let n = estimates.len();
        if n >= 4 {
            let e0 = estimates[n - 1];
            let change = (e0 - estimates[n - 2]).abs() + (e0 - estimates[n - 3]).abs();
            let error = change + sum_error;
            if error <= spec.tolerance_for(e0.abs()) {
                return Ok(IntegralResult {
                    value: e0,
                    error_estimate: error,
                    converged: all_converged,
                    evaluations,
                });
            }
        }
    }
    let n = estimates.len();
    let value = estimates.last().copied().unwrap_or(sum);
    let error = if n >= 3 {
        (value - estimates[n - 2]).abs() + (value - estimates[n - 3]).abs() + sum_error
    } else {
        f64::INFINITY
    };
    Ok(IntegralResult {
        value,
        error_estimate: error,
        converged: false,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn exponential_times_cosine() {
        let r = integrate_oscillatory(
            |x: f64| (-x).exp(),
            OscillatoryKernel::Cos { omega: 1.0 },
            0.0,
            &spec(),
        )
        .unwrap();
        assert!(r.converged, "{r:?}");
        assert!((r.value - 0.5).abs() < 1e-10);
    }

    #[test]
    fn exponential_times_bessel_zero() {
        let kernel = OscillatoryKernel::Bessel {
            order: BesselOrder::integer(0),
            omega: 1.0,
        };
        let r = integrate_oscillatory(|x: f64| (-x).exp(), kernel, 0.0, &spec()).unwrap();
        assert!(r.converged, "{r:?}");
        assert!((r.value - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn zero_envelope() {
        let r = integrate_oscillatory(|_| 0.0, OscillatoryKernel::Sin { omega: 3.0 }, 0.0, &spec())
            .unwrap();
        assert!(r.converged);
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn conditionally_convergent_integrals_are_accelerated() {
        // int_0^inf sin(x)/x = pi/2
        let r = integrate_oscillatory(
            |x: f64| if x == 0.0 { 1.0 } else { 1.0 / x },
            OscillatoryKernel::Sin { omega: 1.0 },
            0.0,
            &spec(),
        )
        .unwrap();
        assert!(r.converged, "{r:?}");
        assert!((r.value - FRAC_PI_2).abs() < 1e-9);
        // int_0^inf J_0(x) = 1
        let kernel = OscillatoryKernel::Bessel {
            order: BesselOrder::integer(0),
            omega: 1.0,
        };
        let r = integrate_oscillatory(|_| 1.0, kernel, 0.0, &spec()).unwrap();
        assert!(r.converged, "{r:?}");
        assert!((r.value - 1.0).abs() < 1e-9);
        // int_0^inf J_1(2x)/x dx = int_0^inf J_1(t)/t dt = 1
        let kernel = OscillatoryKernel::Bessel {
            order: BesselOrder::integer(1),
            omega: 2.0,
        };
        let r = integrate_oscillatory(|x: f64| 1.0 / x, kernel, 0.0, &spec()).unwrap();
        assert!(r.converged, "{r:?}");
        assert!((r.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn nonzero_lower_bound() {
        // int_2^inf e^{-x} sin(3x) dx = e^{-2} (sin 6 + 3 cos 6) / 10
        let r = integrate_oscillatory(
            |x: f64| (-x).exp(),
            OscillatoryKernel::Sin { omega: 3.0 },
            2.0,
            &spec(),
        )
        .unwrap();
        let want = (-2.0f64).exp() * (6.0f64.sin() + 3.0 * 6.0f64.cos()) / 10.0;
        assert!(
            r.converged && (r.value - want).abs() < 1e-11,
            "{r:?} vs {want}"
        );
    }

    #[test]
    fn stalled_acceleration_is_flagged() {
        let few = QuadratureSpec {
            max_oscillation_cells: 4,
            ..spec()
        };
        let r = integrate_oscillatory(
            |x: f64| 1.0 / (1.0 + x).sqrt(),
            OscillatoryKernel::Cos { omega: 1.0 },
            0.0,
            &few,
        )
        .unwrap();
        assert!(!r.converged);
    }

    #[test]
    fn damped_cosine_grid() {
        for a in [0.5, 1.0, 2.0] {
            for w in [0.5, 1.0, 2.0] {
                let r = integrate_oscillatory(
                    move |x: f64| (-a * x).exp(),
                    OscillatoryKernel::Cos { omega: w },
                    0.0,
                    &spec(),
                )
                .unwrap();
                let want = a / (a * a + w * w);
                assert!(
                    r.converged && (r.value - want).abs() <= 1e-9,
                    "a={a} w={w}: {r:?}"
                );
            }
        }
    }

    #[test]
    fn wynn_sums_an_alternating_series() {
        // ln 2 = 1 - 1/2 + 1/3 - ...
        let mut s = 0.0;
        let sums: Vec<f64> = (1..20)
            .map(|n| {
                s += if n % 2 == 1 { 1.0 } else { -1.0 } / n as f64;
                s
            })
            .collect();
        assert!((wynn_epsilon(&sums) - std::f64::consts::LN_2).abs() < 1e-12);
    }
}
