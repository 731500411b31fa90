//! Null distribution of `√n |S_ij|` for independent spherical data and the
//! bounds built on it.
//!
//! With `n` observations the scaled absolute correlation has density
//! `f_n(x) = c_n (1 − x²/n)^{(n−4)/2}` on `[0, √n]`, where
//! `c_n = 2/√(nπ) · Γ((n−1)/2)/Γ((n−2)/2)`. Its tail is the regularized
//! incomplete beta `F̄_n(x) = I_{1−x²/n}((n−2)/2, 1/2)`.
//!
//! Integrals over the support use `x = √n sin θ`, which turns `f_n(x) dx`
//! into `c_n √n cos^{n−3}θ dθ` on `[0, π/2]` and removes the endpoint
//! singularity at `n = 3`.

use core::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{integrate, Quadrature, Tolerance};
use crate::special::ln_beta_reg_split;

/// Absolute tolerance for normalization and tail integrals.
pub const QUAD_ABS_TOL: f64 = 1e-10;
/// Relative tolerance for integrals whose value is itself tiny.
pub const QUAD_REL_TOL: f64 = 1e-10;

/// Survival function of the exponential with mean `mu`.
pub fn exp_survival(mu: f64, t: f64) -> f64 {
    libm::exp(-t / mu)
}

fn pairs(p: usize) -> f64 {
    let p = p as f64;
    p * (p - 1.0) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MillsBounds {
    /// Present only above the threshold `a_n`.
    pub lower: Option<f64>,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjectureValue {
    pub p: usize,
    pub k: usize,
    /// Upper integration limit `√((4 − 2/(k+2)) log p)`, capped at `√n`.
    pub upper_limit: f64,
    pub value: f64,
    /// `p^{2k} · value`.
    pub scaled: f64,
    pub quadrature: Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Int3Check {
    pub integral: f64,
    pub bound: f64,
    pub quadrature: Quadrature,
}

impl Int3Check {
    /// The inequality is refuted only if the integral exceeds the bound by
    /// more than the quadrature error estimate. For `k ≥ 1` and large
    /// `C(p,2)` the true gap falls below double precision.
    pub fn holds(&self) -> bool {
        self.integral - self.quadrature.error <= self.bound
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NullMarginal {
    pub n: usize,
    pub c_n: f64,
    pub ln_c_n: f64,
    pub a_n: f64,
}

impl NullMarginal {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain {
                what: "sample size",
                value: n as f64,
                domain: "[3, inf)",
            });
        }
        let nf = n as f64;
        let ln_c_n = libm::log(2.0) - 0.5 * libm::log(nf * PI) + libm::lgamma((nf - 1.0) / 2.0)
            - libm::lgamma((nf - 2.0) / 2.0);
        let a_n = if n == 3 {
            libm::sqrt(3.0 / 5.0)
        } else {
            let disc = libm::sqrt(8.0 * nf * nf - 16.0 * nf + 1.0);
            libm::sqrt((disc - 2.0 * nf + 1.0) / (2.0 * (nf - 3.0)))
        };
        Ok(Self {
            n,
            c_n: libm::exp(ln_c_n),
            ln_c_n,
            a_n,
        })
    }

    pub fn sqrt_n(&self) -> f64 {
        libm::sqrt(self.n as f64)
    }

    fn exponent(&self) -> f64 {
        (self.n as f64 - 4.0) / 2.0
    }

    fn shape(&self) -> f64 {
        (self.n as f64 - 2.0) / 2.0
    }

    /// `f_n(x)`; zero outside `[0, √n]`.
    pub fn density(&self, x: f64) -> f64 {
        let root = self.sqrt_n();
        if !(0.0..=root).contains(&x) {
            return 0.0;
        }
        if self.n == 4 {
            return self.c_n;
        }
        let u = x / root;
        self.c_n * libm::pow((1.0 - u) * (1.0 + u), self.exponent())
    }

    pub fn ln_density(&self, x: f64) -> f64 {
        let root = self.sqrt_n();
        if !(0.0..=root).contains(&x) {
            return f64::NEG_INFINITY;
        }
        if self.n == 4 {
            return self.ln_c_n;
        }
        let u = x / root;
        self.ln_c_n + self.exponent() * (libm::log1p(-u) + libm::log1p(u))
    }

    /// `ln F̄_n` from `1 − x²/n` and `x²/n` supplied separately.
    fn ln_tail_split(&self, one_minus: f64, frac: f64) -> Result<f64> {
        ln_beta_reg_split(self.shape(), 0.5, one_minus, frac)
    }

    fn ln_tail_inner(&self, x: f64) -> Result<f64> {
        let u = x / self.sqrt_n();
        self.ln_tail_split((1.0 - u) * (1.0 + u), u * u)
    }

    /// `ln F̄_n(x)`.
    pub fn ln_tail(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= self.sqrt_n() {
            return f64::NEG_INFINITY;
        }
        self.ln_tail_inner(x)
            .unwrap_or_else(|_| libm::log(self.tail_quadrature(x).value))
    }

    /// `F̄_n(x) = Pr(√n |S_ij| > x)` under independence.
    pub fn tail(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        if x >= self.sqrt_n() {
            return 0.0;
        }
        match self.ln_tail_inner(x) {
            Ok(v) => libm::exp(v),
            Err(_) => self.tail_quadrature(x).value,
        }
    }

    fn theta(&self, x: f64) -> f64 {
        libm::asin((x / self.sqrt_n()).clamp(0.0, 1.0))
    }

    /// `f_n(x) dx` expressed in the angle variable.
    fn angle_weight(&self, theta: f64) -> f64 {
        let w = self.c_n * self.sqrt_n();
        if self.n == 3 {
            w
        } else {
            w * libm::pow(libm::cos(theta).max(0.0), self.n as f64 - 3.0)
        }
    }

    /// `F̄_n` at `x = √n sin θ`, exact near both ends of the support.
    fn tail_at_angle(&self, theta: f64) -> f64 {
        let (s, c) = (libm::sin(theta), libm::cos(theta));
        if c <= 0.0 {
            return 0.0;
        }
        if s <= 0.0 {
            return 1.0;
        }
        match self.ln_tail_split(c * c, s * s) {
            Ok(v) => libm::exp(v),
            Err(_) => self.tail_quadrature(self.sqrt_n() * s).value,
        }
    }

    /// `∫_a^b h(x) f_n(x) dx` for `0 ≤ a ≤ b ≤ √n`, where `h` receives the
    /// angle and `x`.
    fn integrate_against_density<H: FnMut(f64, f64) -> f64>(
        &self,
        a: f64,
        b: f64,
        mut h: H,
        tol: Tolerance,
    ) -> Quadrature {
        let root = self.sqrt_n();
        let (ta, tb) = (self.theta(a), self.theta(b));
        integrate(
            |theta| {
                let w = self.angle_weight(theta);
                if w == 0.0 {
                    0.0
                } else {
                    w * h(theta, root * libm::sin(theta))
                }
            },
            ta,
            tb,
            tol,
        )
    }

    /// `∫_0^{√n} f_n` by quadrature.
    pub fn normalization(&self) -> Quadrature {
        self.integrate_against_density(0.0, self.sqrt_n(), |_, _| 1.0, Tolerance::absolute(QUAD_ABS_TOL))
    }

    /// `F̄_n(x)` by direct quadrature of the density.
    pub fn tail_quadrature(&self, x: f64) -> Quadrature {
        let root = self.sqrt_n();
        let x = x.clamp(0.0, root);
        let tol = Tolerance {
            abs: QUAD_ABS_TOL,
            rel: 0.0,
        };
        self.integrate_against_density(x, root, |_, _| 1.0, tol)
    }

    /// `F̄_n(x) / f_n(x)`, evaluated in log space.
    pub fn mills_ratio(&self, x: f64) -> f64 {
        libm::exp(self.ln_tail(x) - self.ln_density(x))
    }

    /// `F̄_n(x) / f_n(x)` by quadrature of `f_n(u)/f_n(x)` over `[x, √n]`.
    /// The integrand is at most 1, so nothing underflows even where both
    /// tail and density do.
    pub fn mills_ratio_quadrature(&self, x: f64) -> Quadrature {
        let root = self.sqrt_n();
        let x = x.clamp(0.0, root);
        let t0 = self.theta(x);
        let c0 = libm::cos(t0);
        let expo = self.n as f64 - 4.0;
        integrate(
            |theta| {
                let c = libm::cos(theta).max(0.0);
                if self.n == 4 {
                    root * c
                } else {
                    root * c * libm::pow(c / c0, expo)
                }
            },
            t0,
            FRAC_PI_2,
            Tolerance::relative(QUAD_REL_TOL),
        )
    }

    /// Upper bound `n/(n−2) · (1/x)(1 − x²/n)` on `(0, √n)` and lower bound
    /// `(n+1)/(n−2) · x/(x²+1) · (1 − x²/n)` for `x > a_n`.
    pub fn mills_bounds(&self, x: f64) -> Result<MillsBounds> {
        let root = self.sqrt_n();
        if !(x > 0.0 && x < root) {
            return Err(Error::Domain {
                what: "Mills ratio argument",
                value: x,
                domain: "(0, sqrt(n))",
            });
        }
        let nf = self.n as f64;
        let u = x / root;
        let shrink = (1.0 - u) * (1.0 + u);
        let upper = nf / (nf - 2.0) / x * shrink;
        let lower = (x > self.a_n).then(|| (nf + 1.0) / (nf - 2.0) * x / (x * x + 1.0) * shrink);
        Ok(MillsBounds { lower, upper })
    }

    /// Chen-Stein approximation `exp(−C(p,2) F̄_n(x))` to
    /// `Pr(√n max |S_ij| < x)`.
    pub fn max_cdf_chenstein(&self, p: usize, x: f64) -> f64 {
        libm::exp(-pairs(p) * self.tail(x))
    }

    /// Error bound `2p³F̄_n(x)²` attached to the Chen-Stein approximation.
    pub fn chenstein_error_bound(&self, p: usize, x: f64) -> f64 {
        let f = self.tail(x);
        2.0 * libm::pow(p as f64, 3.0) * f * f
    }

    /// `exp(−p^{3/5} / (4√(log p)))`, an upper bound on
    /// `Pr(√n max |S_ij| < √(log p))` for `p ≥ 8`.
    pub fn max_lower_bound(&self, p: usize) -> Result<f64> {
        if p < 8 {
            return Err(Error::Domain {
                what: "dimension for the max lower bound",
                value: p as f64,
                domain: "[8, inf)",
            });
        }
        let pf = p as f64;
        Ok(libm::exp(-libm::pow(pf, 0.6) / (4.0 * libm::sqrt(libm::log(pf)))))
    }

    /// Third-moment Chebyshev bound on `Pr(fewer than k pairs exceed x)`.
    pub fn chebyshev_count_bound(&self, p: usize, x: f64, k: usize) -> Result<f64> {
        let big_n = pairs(p);
        let f = self.tail(x);
        let mean = big_n * f;
        if !((k as f64) < mean) {
            return Err(Error::Domain {
                what: "count k for the Chebyshev bound",
                value: k as f64,
                domain: "[0, C(p,2) F(x))",
            });
        }
        let shrink = 1.0 - k as f64 / mean;
        Ok((1.0 + 4.0 * (p as f64 - 3.0) * f) / (mean * mean) / (shrink * shrink * shrink))
    }

    /// `∫_0^U e^{−C(p,2)F̄_n} F̄_n^{k−1} f_n dx` with
    /// `U = √((4 − 2/(k+2)) log p)`, the Chen-Stein form of the maximum's CDF
    /// standing in for the exact one.
    pub fn conjecture_integral(&self, p: usize, k: usize) -> Result<ConjectureValue> {
        if k < 1 {
            return Err(Error::Domain {
                what: "conjecture step k",
                value: k as f64,
                domain: "[1, inf)",
            });
        }
        if p < 2 {
            return Err(Error::Domain {
                what: "dimension",
                value: p as f64,
                domain: "[2, inf)",
            });
        }
        let big_n = pairs(p);
        let kf = k as f64;
        let upper_limit =
            libm::sqrt((4.0 - 2.0 / (kf + 2.0)) * libm::log(p as f64)).min(self.sqrt_n());
        let quadrature = self.integrate_against_density(
            0.0,
            upper_limit,
            |theta, _| {
                let f = self.tail_at_angle(theta);
                libm::exp(-big_n * f) * libm::pow(f, kf - 1.0)
            },
            Tolerance::relative(QUAD_REL_TOL),
        );
        let value = quadrature.value.max(0.0);
        Ok(ConjectureValue {
            p,
            k,
            upper_limit,
            value,
            scaled: value * libm::pow(p as f64, 2.0 * kf),
            quadrature,
        })
    }

    /// `∫_0^{√n} e^{−C(p,2)F̄_n} F̄_n^k f_n dx` next to its bound
    /// `k! / C(p,2)^{k+1}`.
    pub fn int3_bounds_check(&self, p: usize, k: usize) -> Int3Check {
        let big_n = pairs(p);
        let kf = k as f64;
        let quadrature = self.integrate_against_density(
            0.0,
            self.sqrt_n(),
            |theta, _| {
                let f = self.tail_at_angle(theta);
                libm::exp(-big_n * f) * libm::pow(f, kf)
            },
            Tolerance::relative(QUAD_REL_TOL),
        );
        let ln_bound = libm::lgamma(kf + 1.0) - (kf + 1.0) * libm::log(big_n);
        Int3Check {
            integral: quadrature.value,
            bound: libm::exp(ln_bound),
            quadrature,
        }
    }

    /// `Pr(√n|S|(√n|S| − x) ≥ t) / Pr(√n|S| ≥ x)`, the conditional
    /// survival of the overshoot statistic above level `x`.
    pub fn gap_survival_ratio(&self, x: f64, t: f64) -> f64 {
        let s = 0.5 * (x + libm::sqrt(x * x + 4.0 * t));
        libm::exp(self.ln_tail(s) - self.ln_tail(x))
    }
}

/// `points` equally spaced interior points `√n·i/(points+1)` of the support.
pub fn support_grid(nm: &NullMarginal, points: usize) -> impl Iterator<Item = f64> + '_ {
    let root = nm.sqrt_n();
    (1..=points).map(move |i| root * i as f64 / (points + 1) as f64)
}
