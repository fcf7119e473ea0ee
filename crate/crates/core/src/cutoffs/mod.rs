//! C² cut-off profiles and the two space-time test-function families.
//!
//! * [`RadialCutoff`]: `φ_R(x, t) = φ((t^{θ₂} + d(x₀, x)^{θ₁}) / R^{θ₁})^s`.
//! * [`SeparableCutoff`]: `φ_R(x, t) = η^s(t / R^{(1+α)/2}) ψ((d(x, x₀) − j) / R)`.
//!
//! The profiles `φ`, `η` and `ψ` only need to be C², monotone and flat on
//! their plateaus. They are built here from the quintic smoothstep
//! `S(t) = 6t⁵ − 15t⁴ + 10t³`, whose first and second derivatives vanish at
//! both ends:
//!
//! * `φ(r) = η(r) = 1 − S(r − 1)` on `(1, 2)`, 1 before, 0 after;
//! * `ψ(r) = exp(−δ g(r))` with `g(r) = r S(r − 1)` on `(1, 2)`, `g = 0` on
//!   `[−j, 1]` and `g(r) = r` on `[2, ∞)`.

mod lemma;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::DistanceField;

pub use lemma::{
    verify_lemma_sec3, verify_lemma_sec3_with, verify_lemma_sec4, verify_lemma_sec4_with,
    spread, RadialLemmaReport, SeparableLemmaReport, SupportCheck, DEFAULT_POINTS_PER_UNIT,
};

/// Value and first two derivatives of a scalar function at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub const ZERO: Jet = Jet { value: 0.0, d1: 0.0, d2: 0.0 };
    pub const ONE: Jet = Jet { value: 1.0, d1: 0.0, d2: 0.0 };

    /// Chain rule through `u ↦ u^s`.
    pub fn powf(self, s: f64) -> Jet {
        if s == 1.0 {
            return self;
        }
        if self.value == 0.0 {
            // Every profile here is flat wherever it vanishes.
            return Jet::ZERO;
        }
        let v = self.value;
        let pow_s1 = v.powf(s - 1.0);
        Jet {
            value: pow_s1 * v,
            d1: s * pow_s1 * self.d1,
            d2: s * (s - 1.0) * v.powf(s - 2.0) * self.d1 * self.d1 + s * pow_s1 * self.d2,
        }
    }

    /// Product with a factor that does not depend on the differentiation
    /// variable.
    pub fn scale(self, c: f64) -> Jet {
        Jet {
            value: self.value * c,
            d1: self.d1 * c,
            d2: self.d2 * c,
        }
    }
}

/// `S(t) = 6t⁵ − 15t⁴ + 10t³` on `[0, 1]`, clamped to 0 below and 1 above.
pub fn smoothstep(t: f64) -> f64 {
    smoothstep_jet(t).value
}

pub fn smoothstep_d1(t: f64) -> f64 {
    smoothstep_jet(t).d1
}

pub fn smoothstep_d2(t: f64) -> f64 {
    smoothstep_jet(t).d2
}

pub fn smoothstep_jet(t: f64) -> Jet {
    if t <= 0.0 {
        Jet::ZERO
    } else if t >= 1.0 {
        Jet::ONE
    } else {
        let u = 1.0 - t;
        Jet {
            value: t * t * t * (10.0 - 15.0 * t + 6.0 * t * t),
            d1: 30.0 * t * t * u * u,
            d2: 60.0 * t * u * (1.0 - 2.0 * t),
        }
    }
}

/// `φ`: 1 on `[0, 1]`, 0 on `[2, ∞)`, nonincreasing and C².
pub fn phi_jet(r: f64) -> Jet {
    if r <= 1.0 {
        Jet::ONE
    } else if r >= 2.0 {
        Jet::ZERO
    } else {
        let s = smoothstep_jet(r - 1.0);
        Jet {
            value: 1.0 - s.value,
            d1: -s.d1,
            d2: -s.d2,
        }
    }
}

pub fn phi(r: f64) -> f64 {
    phi_jet(r).value
}

pub fn phi_d1(r: f64) -> f64 {
    phi_jet(r).d1
}

pub fn phi_d2(r: f64) -> f64 {
    phi_jet(r).d2
}

/// Time profile of the separable family; same shape as `φ`.
pub fn eta_jet(r: f64) -> Jet {
    phi_jet(r)
}

/// `ψ(r) = exp(−δ g(r))` on `[−j, ∞)`.
pub fn psi_jet(r: f64, delta: f64, j: f64) -> Result<Jet> {
    if r < -j {
        return Err(Error::OutOfDomain { arg: r, lower: -j });
    }
    if r <= 1.0 {
        return Ok(Jet::ONE);
    }
    let (g, g1, g2) = if r >= 2.0 {
        (r, 1.0, 0.0)
    } else {
        let s = smoothstep_jet(r - 1.0);
        (r * s.value, s.value + r * s.d1, 2.0 * s.d1 + r * s.d2)
    };
    let v = (-delta * g).exp();
    Ok(Jet {
        value: v,
        d1: -delta * g1 * v,
        d2: (delta * delta * g1 * g1 - delta * g2) * v,
    })
}

pub fn psi(r: f64, delta: f64, j: f64) -> Result<f64> {
    psi_jet(r, delta, j).map(|p| p.value)
}

/// One-dimensional cut-off profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CutoffProfile {
    Phi,
    Eta,
    Psi { delta: f64, j: f64 },
}

impl CutoffProfile {
    pub fn jet(&self, r: f64) -> Result<Jet> {
        match *self {
            CutoffProfile::Phi => Ok(phi_jet(r)),
            CutoffProfile::Eta => Ok(eta_jet(r)),
            CutoffProfile::Psi { delta, j } => psi_jet(r, delta, j),
        }
    }
}

/// Smallest integer `s > 2` with `p (q (s − 2) − 2) > s`.
pub fn default_power(p: f64, q: f64) -> u32 {
    (3..).find(|&s| p * (q * (s as f64 - 2.0) - 2.0) > s as f64).expect("p, q > 1")
}

/// `φ_R(x, t) = φ((t^{θ₂} + d^{θ₁}) / R^{θ₁})^s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialCutoff {
    pub theta1: f64,
    pub theta2: f64,
    #[serde(rename = "R")]
    pub radius: f64,
    pub power: f64,
}

impl RadialCutoff {
    pub fn new(theta1: f64, theta2: f64, radius: f64, power: f64) -> Result<Self> {
        if !(theta1 >= 2.0 && theta2 >= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "θ₁ = {theta1}, θ₂ = {theta2}: both must be ≥ 2"
            )));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!("R = {radius} must be positive")));
        }
        if !(power >= 1.0) {
            return Err(Error::InvalidParameter(format!("s = {power} must be ≥ 1")));
        }
        Ok(Self {
            theta1,
            theta2,
            radius,
            power,
        })
    }

    /// Last time at which the function is nonzero anywhere.
    pub fn time_support(&self) -> f64 {
        (2.0 * self.radius.powf(self.theta1)).powf(1.0 / self.theta2)
    }

    /// Largest distance at which the function is nonzero.
    pub fn spatial_support(&self) -> f64 {
        2f64.powf(1.0 / self.theta1) * self.radius
    }

    /// Jet of `φ_R` itself (power 1) in `t`.
    pub fn base_jet(&self, d: f64, t: f64) -> Jet {
        let scale = self.radius.powf(self.theta1);
        let a = (t.powf(self.theta2) + d.powf(self.theta1)) / scale;
        let profile = phi_jet(a);
        if profile.d1 == 0.0 && profile.d2 == 0.0 {
            return profile;
        }
        let a_t = self.theta2 * t.powf(self.theta2 - 1.0) / scale;
        let a_tt = self.theta2 * (self.theta2 - 1.0) * t.powf(self.theta2 - 2.0) / scale;
        Jet {
            value: profile.value,
            d1: profile.d1 * a_t,
            d2: profile.d2 * a_t * a_t + profile.d1 * a_tt,
        }
    }

    pub fn eval(&self, d: f64, t: f64) -> Jet {
        self.base_jet(d, t).powf(self.power)
    }
}

/// `φ_R(x, t) = η^s(t / R^{(1+α)/2}) ψ((d − j) / R)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeparableCutoff {
    pub power: f64,
    #[serde(rename = "R")]
    pub radius: f64,
    pub alpha: f64,
    pub delta: f64,
    pub jump: f64,
}

impl SeparableCutoff {
    /// `R ≥ 1` keeps the ψ argument `(d − j)/R` inside ψ's domain `[−j, ∞)`.
    pub fn new(power: f64, radius: f64, alpha: f64, delta: f64, jump: f64) -> Result<Self> {
        if !(power >= 1.0) {
            return Err(Error::InvalidParameter(format!("s = {power} must be ≥ 1")));
        }
        if !(radius >= 1.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!("R = {radius} must be ≥ 1")));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!("α = {alpha} not in [0, 1]")));
        }
        if !(delta > 0.0) {
            return Err(Error::InvalidParameter(format!("δ = {delta} must be positive")));
        }
        if !(jump >= 0.0) {
            return Err(Error::InvalidParameter(format!("j = {jump} must be ≥ 0")));
        }
        Ok(Self {
            power,
            radius,
            alpha,
            delta,
            jump,
        })
    }

    /// `R^{(1+α)/2}`.
    pub fn time_scale(&self) -> f64 {
        self.radius.powf((1.0 + self.alpha) / 2.0)
    }

    pub fn time_support(&self) -> f64 {
        2.0 * self.time_scale()
    }

    /// `ψ((d − j)/R)`.
    pub fn space_factor(&self, d: f64) -> f64 {
        psi_jet((d - self.jump) / self.radius, self.delta, self.jump)
            .expect("R ≥ 1 keeps the argument in range")
            .value
    }

    /// Jet of `η^s(t / T)` in `t`.
    pub fn time_factor(&self, t: f64) -> Jet {
        let scale = self.time_scale();
        let e = eta_jet(t / scale);
        Jet {
            value: e.value,
            d1: e.d1 / scale,
            d2: e.d2 / (scale * scale),
        }
        .powf(self.power)
    }

    pub fn eval(&self, d: f64, t: f64) -> Jet {
        self.time_factor(t).scale(self.space_factor(d))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TestFunction {
    Radial(RadialCutoff),
    Separable(SeparableCutoff),
}

impl TestFunction {
    /// Value and exact time derivatives at distance `d` from `x₀`.
    pub fn eval(&self, d: f64, t: f64) -> Result<Jet> {
        if t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        Ok(match self {
            TestFunction::Radial(c) => c.eval(d, t),
            TestFunction::Separable(c) => c.eval(d, t),
        })
    }

    pub fn time_support(&self) -> f64 {
        match self {
            TestFunction::Radial(c) => c.time_support(),
            TestFunction::Separable(c) => c.time_support(),
        }
    }
}

/// `(φ_R, (φ_R)_t, (φ_R)_tt)` at vertex `x` and time `t`.
pub fn testfun_eval(tf: &TestFunction, field: &DistanceField, x: usize, t: f64) -> Result<Jet> {
    if x >= field.values().len() {
        return Err(Error::UnknownVertex(x));
    }
    tf.eval(field.get(x), t)
}

/// Space-time sets on which the test-function derivatives live.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum SpaceTimeRegion {
    /// `R^{θ₁} ≤ d^{θ₁} + t^{θ₂} ≤ 2R^{θ₁}`.
    E {
        #[serde(rename = "R")]
        radius: f64,
        theta1: f64,
        theta2: f64,
    },
    /// `(R/2)^{θ₁} ≤ d^{θ₁} + t^{θ₂} ≤ (4R)^{θ₁}`.
    F {
        #[serde(rename = "R")]
        radius: f64,
        theta1: f64,
        theta2: f64,
    },
    /// `V × [R^{(1+α)/2}, 2R^{(1+α)/2}]`.
    Q {
        #[serde(rename = "R")]
        radius: f64,
        alpha: f64,
    },
}

impl SpaceTimeRegion {
    /// `(lower, upper, θ₁, θ₂)` bounds on `d^{θ₁} + t^{θ₂}` for the annular
    /// kinds.
    fn annulus(&self) -> Option<(f64, f64, f64, f64)> {
        match *self {
            SpaceTimeRegion::E {
                radius,
                theta1,
                theta2,
            } => {
                let r = radius.powf(theta1);
                Some((r, 2.0 * r, theta1, theta2))
            }
            SpaceTimeRegion::F {
                radius,
                theta1,
                theta2,
            } => Some((
                (radius / 2.0).powf(theta1),
                (4.0 * radius).powf(theta1),
                theta1,
                theta2,
            )),
            SpaceTimeRegion::Q { .. } => None,
        }
    }

    pub fn contains(&self, d: f64, t: f64) -> bool {
        match *self {
            SpaceTimeRegion::Q { radius, alpha } => {
                let scale = radius.powf((1.0 + alpha) / 2.0);
                (scale..=2.0 * scale).contains(&t)
            }
            _ => {
                let (lo, hi, th1, th2) = self.annulus().expect("annular kind");
                let a = d.powf(th1) + t.powf(th2);
                lo <= a && a <= hi
            }
        }
    }

    /// Times `t ≥ 0` at which `(x, t)` belongs to the region for a vertex at
    /// distance `d`, as a closed interval.
    pub fn time_interval(&self, d: f64) -> Option<(f64, f64)> {
        match *self {
            SpaceTimeRegion::Q { radius, alpha } => {
                let scale = radius.powf((1.0 + alpha) / 2.0);
                Some((scale, 2.0 * scale))
            }
            _ => {
                let (lo, hi, th1, th2) = self.annulus().expect("annular kind");
                let dp = d.powf(th1);
                if dp > hi {
                    return None;
                }
                let t_lo = (lo - dp).max(0.0).powf(1.0 / th2);
                let t_hi = (hi - dp).powf(1.0 / th2);
                Some((t_lo, t_hi))
            }
        }
    }

    /// Largest distance with a nonempty time interval; `None` when
    /// unbounded.
    pub fn spatial_reach(&self) -> Option<f64> {
        self.annulus().map(|(_, hi, th1, _)| hi.powf(1.0 / th1))
    }
}

pub fn region_membership(reg: &SpaceTimeRegion, d: f64, t: f64) -> bool {
    reg.contains(d, t)
}

pub fn region_time_interval(reg: &SpaceTimeRegion, d: f64) -> Option<(f64, f64)> {
    reg.time_interval(d)
}
