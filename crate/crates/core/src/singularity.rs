//! Invertibility condition of the attitude-altitude decoupling matrix.
//!
//! The condition is a trigonometric polynomial in the four tilting angles and
//! in roll/pitch. Every formula below is stored as a table of monomials in the
//! order they are printed, so that each row can be checked against the source
//! by eye. Nothing is simplified on entry: the identities between the tables
//! (full condition at zero attitude == constant term, Taylor slopes ==
//! linear coefficients) are what catch transcription errors.

use core::f64::consts::FRAC_PI_2;

use crate::error::Error;

/// Slack allowed on the closed tilting-angle domain `[-pi/2, pi/2]`.
pub const DOMAIN_SLACK: f64 = 1e-9;

// Geometry coefficients of the invertibility condition. They are opaque data
// printed to four significant figures and treated as exact.
pub const K_UNIT: f64 = 1.000;
pub const K_ARM: f64 = 2.880;
pub const K_HOVER: f64 = 4.000;
pub const K_CROSS: f64 = 5.592;
pub const K_SKEW: f64 = 0.9716;
pub const K_TWO: f64 = 2.000;
pub const K_DRAG: f64 = 0.1687;

/// One quadruple of tilting angles, radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaitPoint {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub alpha4: f64,
}

impl GaitPoint {
    pub fn new(alpha1: f64, alpha2: f64, alpha3: f64, alpha4: f64) -> Result<Self, Error> {
        for (idx, a) in [alpha1, alpha2, alpha3, alpha4].into_iter().enumerate() {
            check_tilt(idx + 1, a)?;
        }
        Ok(Self {
            alpha1,
            alpha2,
            alpha3,
            alpha4,
        })
    }

    pub fn from_array(a: [f64; 4]) -> Result<Self, Error> {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.alpha1, self.alpha2, self.alpha3, self.alpha4]
    }

    /// Quadruple `(a, b, a, b)`: rear rotors mirror the front ones.
    pub fn identity(alpha1: f64, alpha2: f64) -> Result<Self, Error> {
        Self::new(alpha1, alpha2, alpha1, alpha2)
    }
}

pub(crate) fn check_tilt(index: usize, value: f64) -> Result<(), Error> {
    if !value.is_finite() {
        return Err(Error::NonFinite { index });
    }
    if value.abs() > FRAC_PI_2 + DOMAIN_SLACK {
        return Err(Error::OutOfDomain { index, value });
    }
    Ok(())
}

/// Roll and pitch, radians.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Attitude {
    pub phi: f64,
    pub theta: f64,
}

impl Attitude {
    pub const ZERO: Attitude = Attitude { phi: 0.0, theta: 0.0 };

    pub fn new(phi: f64, theta: f64) -> Result<Self, Error> {
        if !phi.is_finite() {
            return Err(Error::NonFinite { index: 5 });
        }
        if !theta.is_finite() {
            return Err(Error::NonFinite { index: 6 });
        }
        Ok(Self { phi, theta })
    }

    /// Distance from zero attitude.
    pub fn norm(self) -> f64 {
        libm::hypot(self.phi, self.theta)
    }
}

/// Linear-in-attitude coefficients and constant term at one gait point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearizedTriple {
    pub r_phi: f64,
    pub r_theta: f64,
    pub r: f64,
}

impl LinearizedTriple {
    pub fn at(g: &GaitPoint) -> Self {
        let t = TiltTrig::new(g);
        Self {
            r_phi: t.eval(R_PHI_TERMS),
            r_theta: t.eval(R_THETA_TERMS),
            r: t.eval(R_TERMS),
        }
    }

    pub fn value(&self, a: Attitude) -> f64 {
        self.r_phi * a.phi + self.r_theta * a.theta + self.r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum F {
    S,
    C,
}

/// Attitude factor multiplying a monomial of the full condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Att {
    /// sin(theta)
    St,
    /// cos(phi) cos(theta)
    CpCt,
    /// sin(phi) cos(theta)
    SpCt,
}

/// `coef * f1(alpha1) * f2(alpha2) * f3(alpha3) * f4(alpha4)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Term {
    pub coef: f64,
    pub f: [F; 4],
}

const fn t(coef: f64, f: [F; 4]) -> Term {
    Term { coef, f }
}

use F::{C, S};

/// Full condition, one row per printed monomial.
pub(crate) const FULL_TERMS: &[(Term, Att)] = &[
    (t(K_UNIT, [C, C, C, S]), Att::St),
    (t(-K_UNIT, [C, S, C, C]), Att::St),
    (t(-K_ARM, [C, C, S, S]), Att::St),
    (t(K_ARM, [C, S, S, C]), Att::St),
    (t(-K_ARM, [S, C, C, S]), Att::St),
    (t(K_ARM, [S, S, C, C]), Att::St),
    (t(-K_UNIT, [S, C, S, S]), Att::St),
    (t(K_UNIT, [S, S, S, C]), Att::St),
    (t(K_HOVER, [C, C, C, C]), Att::CpCt),
    (t(K_CROSS, [C, C, C, S]), Att::CpCt),
    (t(-K_CROSS, [C, C, S, C]), Att::CpCt),
    (t(K_CROSS, [C, S, C, C]), Att::CpCt),
    (t(-K_CROSS, [S, C, C, C]), Att::CpCt),
    (t(K_UNIT, [C, C, S, C]), Att::SpCt),
    (t(K_SKEW, [C, C, S, S]), Att::CpCt),
    (t(-K_TWO, [C, S, C, S]), Att::CpCt),
    (t(K_SKEW, [C, S, S, C]), Att::CpCt),
    (t(-K_UNIT, [S, C, C, C]), Att::SpCt),
    (t(K_SKEW, [S, C, C, S]), Att::CpCt),
    (t(-K_TWO, [S, C, S, C]), Att::CpCt),
    (t(K_SKEW, [S, S, C, C]), Att::CpCt),
    (t(K_ARM, [C, C, S, S]), Att::SpCt),
    (t(K_ARM, [C, S, S, C]), Att::SpCt),
    (t(-K_DRAG, [C, S, S, S]), Att::CpCt),
    (t(-K_ARM, [S, C, C, S]), Att::SpCt),
    (t(K_DRAG, [S, C, S, S]), Att::CpCt),
    (t(-K_ARM, [S, S, C, C]), Att::SpCt),
    (t(-K_DRAG, [S, S, C, S]), Att::CpCt),
    (t(K_DRAG, [S, S, S, C]), Att::CpCt),
    (t(-K_UNIT, [C, S, S, S]), Att::SpCt),
    (t(K_UNIT, [S, S, C, S]), Att::SpCt),
];

/// Roll coefficient of the near-zero-attitude expansion.
pub(crate) const R_PHI_TERMS: &[Term] = &[
    t(K_UNIT, [C, C, S, C]),
    t(-K_UNIT, [S, C, C, C]),
    t(-K_UNIT, [C, S, S, S]),
    t(K_UNIT, [S, S, C, S]),
    t(K_ARM, [C, C, S, S]),
    t(K_ARM, [C, S, S, C]),
    t(-K_ARM, [S, C, C, S]),
    t(-K_ARM, [S, S, C, C]),
];

/// Pitch coefficient of the near-zero-attitude expansion.
pub(crate) const R_THETA_TERMS: &[Term] = &[
    t(K_UNIT, [C, C, C, S]),
    t(-K_UNIT, [C, S, C, C]),
    t(-K_UNIT, [S, C, S, S]),
    t(K_UNIT, [S, S, S, C]),
    t(-K_ARM, [C, C, S, S]),
    t(K_ARM, [C, S, S, C]),
    t(-K_ARM, [S, C, C, S]),
    t(K_ARM, [S, S, C, C]),
];

/// Constant term of the near-zero-attitude expansion.
pub(crate) const R_TERMS: &[Term] = &[
    t(K_HOVER, [C, C, C, C]),
    t(K_CROSS, [C, C, C, S]),
    t(-K_CROSS, [C, C, S, C]),
    t(K_CROSS, [C, S, C, C]),
    t(-K_CROSS, [S, C, C, C]),
    t(K_SKEW, [C, C, S, S]),
    t(K_SKEW, [C, S, S, C]),
    t(K_SKEW, [S, C, C, S]),
    t(K_SKEW, [S, S, C, C]),
    t(-K_TWO, [C, S, C, S]),
    t(-K_TWO, [S, C, S, C]),
    t(-K_DRAG, [C, S, S, S]),
    t(K_DRAG, [S, C, S, S]),
    t(-K_DRAG, [S, S, C, S]),
    t(K_DRAG, [S, S, S, C]),
];

/// Sines and cosines of the four tilting angles.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TiltTrig {
    s: [f64; 4],
    c: [f64; 4],
}

impl TiltTrig {
    pub fn new(g: &GaitPoint) -> Self {
        Self::from_angles(g.to_array())
    }

    pub fn from_angles(a: [f64; 4]) -> Self {
        let mut s = [0.0; 4];
        let mut c = [0.0; 4];
        for k in 0..4 {
            let (sk, ck) = libm::sincos(a[k]);
            s[k] = sk;
            c[k] = ck;
        }
        Self { s, c }
    }

    #[inline]
    fn factor(&self, k: usize, f: F) -> f64 {
        match f {
            F::S => self.s[k],
            F::C => self.c[k],
        }
    }

    #[inline]
    fn monomial(&self, term: &Term) -> f64 {
        term.coef
            * self.factor(0, term.f[0])
            * self.factor(1, term.f[1])
            * self.factor(2, term.f[2])
            * self.factor(3, term.f[3])
    }

    /// Derivative of the monomial in angle `k`: sin -> cos, cos -> -sin.
    #[inline]
    fn monomial_d(&self, term: &Term, k: usize) -> f64 {
        let mut v = term.coef;
        for (m, f) in term.f.iter().enumerate() {
            v *= if m == k {
                match f {
                    F::S => self.c[m],
                    F::C => -self.s[m],
                }
            } else {
                self.factor(m, *f)
            };
        }
        v
    }

    pub fn eval(&self, terms: &[Term]) -> f64 {
        terms.iter().map(|term| self.monomial(term)).sum()
    }

    pub fn eval_d(&self, terms: &[Term], k: usize) -> f64 {
        terms.iter().map(|term| self.monomial_d(term, k)).sum()
    }

    /// Full condition with precomputed attitude factors.
    pub fn eval_full(&self, att: &AttTrig) -> f64 {
        PreparedCondition::new(self).eval(att)
    }

    /// Zero-attitude condition in its grouped printed form.
    pub fn eval_zero_attitude(&self) -> f64 {
        let [s1, s2, s3, s4] = self.s;
        let [c1, c2, c3, c4] = self.c;
        K_HOVER * c1 * c2 * c3 * c4
            + K_CROSS * (c1 * c2 * c3 * s4 - c1 * c2 * s3 * c4 + c1 * s2 * c3 * c4 - s1 * c2 * c3 * c4)
            + K_SKEW * (c1 * c2 * s3 * s4 + c1 * s2 * s3 * c4 + s1 * c2 * c3 * s4 + s1 * s2 * c3 * c4)
            + K_TWO * (-c1 * s2 * c3 * s4 - s1 * c2 * s3 * c4)
            + K_DRAG * (-c1 * s2 * s3 * s4 + s1 * c2 * s3 * s4 - s1 * s2 * c3 * s4 + s1 * s2 * s3 * c4)
    }
}

/// Tilt monomials of the full condition, for repeated evaluation over many
/// attitudes. Summation order matches [`eval_full_condition`] exactly.
#[derive(Debug, Clone, Copy)]
pub struct PreparedCondition {
    mono: [f64; 31],
}

impl PreparedCondition {
    pub(crate) fn new(tr: &TiltTrig) -> Self {
        let mut mono = [0.0; 31];
        for (m, (term, _)) in mono.iter_mut().zip(FULL_TERMS) {
            *m = tr.monomial(term);
        }
        Self { mono }
    }

    pub fn at(g: &GaitPoint) -> Self {
        Self::new(&TiltTrig::new(g))
    }

    #[inline]
    pub(crate) fn eval(&self, att: &AttTrig) -> f64 {
        let mut sum = 0.0;
        for (m, (_, a)) in self.mono.iter().zip(FULL_TERMS) {
            sum += match a {
                Att::St => m * att.s_theta,
                Att::CpCt => m * att.c_phi * att.c_theta,
                Att::SpCt => m * att.s_phi * att.c_theta,
            };
        }
        sum
    }

    /// Value together with `sum |term|`, the scale of its rounding error.
    #[inline]
    pub(crate) fn eval_with_magnitude(&self, att: &AttTrig) -> (f64, f64) {
        let mut sum = 0.0;
        let mut mag = 0.0;
        for (m, (_, a)) in self.mono.iter().zip(FULL_TERMS) {
            let t = match a {
                Att::St => m * att.s_theta,
                Att::CpCt => m * att.c_phi * att.c_theta,
                Att::SpCt => m * att.s_phi * att.c_theta,
            };
            sum += t;
            mag += libm::fabs(t);
        }
        (sum, mag)
    }

    pub fn value(&self, a: Attitude) -> f64 {
        self.eval(&AttTrig::new(a))
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct AttTrig {
    pub s_phi: f64,
    pub c_phi: f64,
    pub s_theta: f64,
    pub c_theta: f64,
}

impl AttTrig {
    pub fn new(a: Attitude) -> Self {
        let (s_phi, c_phi) = libm::sincos(a.phi);
        let (s_theta, c_theta) = libm::sincos(a.theta);
        Self {
            s_phi,
            c_phi,
            s_theta,
            c_theta,
        }
    }
}

/// Left side of the full invertibility condition. The decoupling matrix is
/// singular where this vanishes.
pub fn eval_full_condition(g: &GaitPoint, a: Attitude) -> f64 {
    TiltTrig::new(g).eval_full(&AttTrig::new(a))
}

pub fn eval_r_phi(g: &GaitPoint) -> f64 {
    TiltTrig::new(g).eval(R_PHI_TERMS)
}

pub fn eval_r_theta(g: &GaitPoint) -> f64 {
    TiltTrig::new(g).eval(R_THETA_TERMS)
}

pub fn eval_r(g: &GaitPoint) -> f64 {
    TiltTrig::new(g).eval(R_TERMS)
}

/// Zero-attitude condition, evaluated from its own grouped transcription
/// rather than through [`eval_r`].
pub fn eval_zero_attitude(g: &GaitPoint) -> f64 {
    TiltTrig::new(g).eval_zero_attitude()
}

/// First-order model `R_phi * phi + R_theta * theta + R`.
pub fn eval_linearized(g: &GaitPoint, a: Attitude) -> f64 {
    eval_r_phi(g) * a.phi + eval_r_theta(g) * a.theta + eval_r(g)
}

/// `(R_phi, R_theta)` with its Jacobian in `(alpha3, alpha4)`.
///
/// Returns `([R_phi, R_theta], [[dR_phi/da3, dR_phi/da4], [dR_theta/da3, dR_theta/da4]])`.
pub fn surface_residual_and_jacobian(angles: [f64; 4]) -> ([f64; 2], [[f64; 2]; 2]) {
    let tr = TiltTrig::from_angles(angles);
    let f = [tr.eval(R_PHI_TERMS), tr.eval(R_THETA_TERMS)];
    let j = [
        [tr.eval_d(R_PHI_TERMS, 2), tr.eval_d(R_PHI_TERMS, 3)],
        [tr.eval_d(R_THETA_TERMS, 2), tr.eval_d(R_THETA_TERMS, 3)],
    ];
    (f, j)
}

/// `max(|R_phi|, |R_theta|)` at a gait point.
pub fn surface_residual(g: &GaitPoint) -> f64 {
    let tr = TiltTrig::new(g);
    tr.eval(R_PHI_TERMS).abs().max(tr.eval(R_THETA_TERMS).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn gp(a: [f64; 4]) -> GaitPoint {
        GaitPoint::from_array(a).unwrap()
    }

    #[test]
    fn term_counts_match_printed_formulas() {
        assert_eq!(FULL_TERMS.len(), 31);
        assert_eq!(R_PHI_TERMS.len(), 8);
        assert_eq!(R_THETA_TERMS.len(), 8);
        assert_eq!(R_TERMS.len(), 15);
        let count = |which: Att| FULL_TERMS.iter().filter(|(_, a)| *a == which).count();
        assert_eq!(count(Att::St), 8);
        assert_eq!(count(Att::SpCt), 8);
        assert_eq!(count(Att::CpCt), 15);
    }

    #[test]
    fn zero_gait_values() {
        let z = gp([0.0; 4]);
        assert_eq!(eval_full_condition(&z, Attitude::ZERO), 4.0);
        assert_eq!(eval_r_phi(&z), 0.0);
        assert_eq!(eval_r_theta(&z), 0.0);
        assert_eq!(eval_r(&z), 4.0);
        assert_eq!(eval_zero_attitude(&z), 4.0);
        let a = Attitude::new(0.3, -0.7).unwrap();
        assert_eq!(eval_linearized(&z, a), 4.0);
        let expect = 4.0 * libm::cos(0.3) * libm::cos(-0.7);
        assert!((eval_full_condition(&z, a) - expect).abs() < 1e-15);
    }

    #[test]
    fn single_surviving_terms() {
        let h = FRAC_PI_2;
        // only -1.000 s1 c2 c3 c4 survives
        assert!((eval_r_phi(&gp([h, 0.0, 0.0, 0.0])) + 1.0).abs() < 1e-15);
        // only +1.000 c1 c2 c3 s4 survives
        assert!((eval_r_theta(&gp([0.0, 0.0, 0.0, h])) - 1.0).abs() < 1e-15);
        // every constant-term monomial carries at least one cosine
        assert!(R_TERMS.iter().all(|t| t.f.contains(&F::C)));
        assert!(eval_r(&gp([h; 4])).abs() < 1e-14);
    }

    #[test]
    fn domain_checks() {
        assert!(GaitPoint::new(PI / 2.0 + 5e-10, 0.0, 0.0, 0.0).is_ok());
        assert!(matches!(
            GaitPoint::new(0.0, 2.0, 0.0, 0.0),
            Err(Error::OutOfDomain { index: 2, .. })
        ));
        assert!(matches!(
            GaitPoint::new(0.0, 0.0, f64::NAN, 0.0),
            Err(Error::NonFinite { index: 3 })
        ));
        assert!(Attitude::new(f64::INFINITY, 0.0).is_err());
    }

    #[test]
    fn jacobian_matches_central_differences() {
        let pts = [[0.3, -0.2, 0.9, -1.1], [-1.2, 0.4, 0.1, 0.5], [0.05, 1.3, -0.6, 0.2]];
        let h = 1e-6;
        for a in pts {
            let (_, j) = surface_residual_and_jacobian(a);
            for col in 0..2 {
                let mut up = a;
                let mut dn = a;
                up[col + 2] += h;
                dn[col + 2] -= h;
                let (fu, _) = surface_residual_and_jacobian(up);
                let (fd, _) = surface_residual_and_jacobian(dn);
                for row in 0..2 {
                    let fd_val = (fu[row] - fd[row]) / (2.0 * h);
                    let scale = j[row][col].abs().max(1.0);
                    assert!(
                        (fd_val - j[row][col]).abs() / scale < 1e-6,
                        "row {row} col {col}: {fd_val} vs {}",
                        j[row][col]
                    );
                }
            }
        }
    }

    #[test]
    fn evaluators_are_deterministic() {
        let g = gp([0.31, -0.77, 1.02, -0.4]);
        let a = Attitude::new(0.2, 0.1).unwrap();
        assert_eq!(
            eval_full_condition(&g, a).to_bits(),
            eval_full_condition(&g, a).to_bits()
        );
        let tr = LinearizedTriple::at(&g);
        assert_eq!(tr.r_phi.to_bits(), eval_r_phi(&g).to_bits());
        assert_eq!(tr.r_theta.to_bits(), eval_r_theta(&g).to_bits());
        assert_eq!(tr.r.to_bits(), eval_r(&g).to_bits());
    }
}
