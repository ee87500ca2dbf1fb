//! Bessel J0, Neumann N0 and Struve H0 for real positive and moderate
//! complex arguments.
//!
//! Small arguments are summed by power series in double-double arithmetic
//! (the alternating terms grow like e^rho before cancelling, which f64
//! alone cannot absorb past rho ~ 10).  Large real arguments switch to the
//! Hankel/Watson asymptotic expansions, truncated adaptively at the
//! smallest term.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Euler-Mascheroni constant, split into a double-double pair.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const EULER_GAMMA_LO: f64 = -4.942_915_152_430_645e-18;

/// Largest |z| accepted by the complex power-series path.
pub const COMPLEX_SERIES_BOUND: f64 = 30.0;

/// Which evaluation path produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Series,
    Asymptotic,
}

/// Truncation policy for the power-series and asymptotic paths.
#[derive(Debug, Clone, Copy)]
pub struct SeriesPolicy {
    pub max_terms: usize,
    pub tail_tolerance: f64,
    pub switch_radius: f64,
}

impl SeriesPolicy {
    pub fn new(max_terms: usize, tail_tolerance: f64, switch_radius: f64) -> Result<Self> {
        if max_terms < 30 {
            return Err(Error::Config(format!("max_terms = {max_terms}, need >= 30")));
        }
        if !(tail_tolerance > 0.0 && tail_tolerance <= 1e-8) {
            return Err(Error::Config(format!(
                "tail_tolerance = {tail_tolerance}, need in (0, 1e-8]"
            )));
        }
        if !(10.0..=100.0).contains(&switch_radius) {
            return Err(Error::Config(format!(
                "switch_radius = {switch_radius}, need in [10, 100]"
            )));
        }
        Ok(Self { max_terms, tail_tolerance, switch_radius })
    }

    /// Policy for J0 and N0.
    pub fn bessel_default() -> Self {
        Self { max_terms: 500, tail_tolerance: 1e-12, switch_radius: 18.0 }
    }

    /// Policy for Struve H0.  Its asymptotic tail series diverges faster
    /// than the Hankel sums, so the crossover sits higher.
    pub fn struve_default() -> Self {
        Self { max_terms: 500, tail_tolerance: 1e-12, switch_radius: 30.0 }
    }
}

/// Watson coefficients (0,m) = (-1)^m {(2m-1)!!}^2 / (m! 2^{2m}) driving
/// the Hankel asymptotic sums.
#[derive(Debug, Clone)]
pub struct AsymptoticSeries {
    pub coefficients: Vec<f64>,
    pub order: usize,
}

impl AsymptoticSeries {
    pub fn watson(order: usize) -> Self {
        let mut coefficients = Vec::with_capacity(order);
        let mut c = 1.0;
        for m in 0..order {
            if m > 0 {
                let odd = 2.0 * m as f64 - 1.0;
                c *= -(odd * odd) / (4.0 * m as f64);
            }
            coefficients.push(c);
        }
        Self { coefficients, order }
    }
}

// ---------------------------------------------------------------------------
// double-double arithmetic (enough for alternating series accumulation)

#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        Dd { hi: s, lo: err }
    }

    fn quick_two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        Dd { hi: s, lo: b - (s - a) }
    }

    fn two_prod(a: f64, b: f64) -> Dd {
        let p = a * b;
        Dd { hi: p, lo: a.mul_add(b, -p) }
    }

    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.hi, o.hi);
        let lo = s.lo + self.lo + o.lo;
        Dd::quick_two_sum(s.hi, lo)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = Dd::two_prod(self.hi, o.hi);
        let lo = p.lo + self.hi * o.lo + self.lo * o.hi;
        Dd::quick_two_sum(p.hi, lo)
    }

    fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let p = Dd::two_prod(q1, d);
        let r_hi = self.hi - p.hi;
        let r_lo = self.lo - p.lo;
        let q2 = (r_hi + r_lo) / d;
        Dd::quick_two_sum(q1, q2)
    }

    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    fn abs_hi(self) -> f64 {
        self.hi.abs()
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

// ---------------------------------------------------------------------------
// real-argument power series (double-double accumulation)

fn j0_series_dd(rho: f64, policy: &SeriesPolicy) -> Result<Dd> {
    let q = rho * 0.5;
    let q2 = Dd::two_prod(q, q);
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut small = 0usize;
    for n in 1..=policy.max_terms {
        let nn = (n * n) as f64;
        term = term.mul(q2).div_f64(nn).neg();
        sum = sum.add(term);
        if term.abs_hi() <= policy.tail_tolerance * sum.abs_hi().max(f64::MIN_POSITIVE) {
            small += 1;
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergent(format!("J0 power series at rho = {rho}")))
}

/// Harmonic-number weighted companion series of N0:
/// S = sum_{k>=1} (-1)^k (rho/2)^{2k} H_k / (k!)^2.
fn n0_companion_dd(rho: f64, policy: &SeriesPolicy) -> Result<Dd> {
    let q = rho * 0.5;
    let q2 = Dd::two_prod(q, q);
    let mut t = Dd::ONE;
    let mut h = Dd::ZERO;
    let mut sum = Dd::ZERO;
    let mut small = 0usize;
    for k in 1..=policy.max_terms {
        let kk = (k * k) as f64;
        t = t.mul(q2).div_f64(kk).neg();
        h = h.add(Dd::ONE.div_f64(k as f64));
        let term = t.mul(h);
        sum = sum.add(term);
        let scale = sum.abs_hi().max(1.0);
        if term.abs_hi() <= policy.tail_tolerance * scale {
            small += 1;
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergent(format!("N0 companion series at rho = {rho}")))
}

fn n0_series_real(rho: f64, policy: &SeriesPolicy) -> Result<f64> {
    let j0 = j0_series_dd(rho, policy)?;
    let s = n0_companion_dd(rho, policy)?;
    let log_term = Dd::two_sum(EULER_GAMMA, EULER_GAMMA_LO).add(Dd::from_f64((rho * 0.5).ln()));
    let val = j0.mul(log_term).add(s.neg());
    Ok(val.to_f64() * std::f64::consts::FRAC_2_PI)
}

/// H0 series via Gamma(k+3/2) = sqrt(pi) (2k+1)!!/2^{k+1}:
/// H0(rho) = (2/pi) sum_k (-1)^k rho^{2k+1} / {(2k+1)!!}^2.
fn h0_series_real(rho: f64, policy: &SeriesPolicy) -> Result<f64> {
    let rho2 = Dd::two_prod(rho, rho);
    let mut t = Dd::from_f64(rho);
    let mut sum = t;
    let mut small = 0usize;
    for k in 1..=policy.max_terms {
        let odd = (2 * k + 1) as f64;
        t = t.mul(rho2).div_f64(odd * odd).neg();
        sum = sum.add(t);
        if t.abs_hi() <= policy.tail_tolerance * sum.abs_hi().max(f64::MIN_POSITIVE) {
            small += 1;
            if small >= 2 {
                return Ok(sum.to_f64() * std::f64::consts::FRAC_2_PI);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergent(format!("H0 power series at rho = {rho}")))
}

// ---------------------------------------------------------------------------
// asymptotic expansions (real rho >= switch_radius)

const ASYM_MAX_ORDER: usize = 40;

/// Hankel expansion: f(rho) = sqrt(2/(pi rho)) * sum_m a_m rho^{-m} trig(phase + m pi/2)
/// with a_m = (0,m)/2^m; trig = cos for J0, sin for N0.  Truncated at the
/// smallest term (the expansion is divergent).
fn hankel_asym(rho: f64, sine: bool) -> f64 {
    let phase = rho - std::f64::consts::FRAC_PI_4;
    let (s, c) = phase.sin_cos();
    // trig(phase + m pi/2) cycles through these with period 4
    let cycle = if sine { [s, c, -s, -c] } else { [c, -s, -c, s] };
    let mut a = 1.0; // a_m = (0,m)/2^m
    let mut scale = 1.0; // rho^{-m}
    let mut acc = cycle[0];
    let mut prev = 1.0f64;
    for m in 1..ASYM_MAX_ORDER {
        let odd = 2.0 * m as f64 - 1.0;
        a *= -(odd * odd) / (8.0 * m as f64);
        scale /= rho;
        let mag = (a * scale).abs();
        if mag >= prev {
            break; // past optimal truncation
        }
        acc += a * scale * cycle[m % 4];
        if mag < 1e-17 {
            break;
        }
        prev = mag;
    }
    (2.0 / (std::f64::consts::PI * rho)).sqrt() * acc
}

/// Struve tail: H0(rho) - N0(rho) = (2/pi) sum_k (-1)^k {(2k-1)!!}^2 rho^{-2k-1},
/// truncated at the smallest term.
fn struve_tail_asym(rho: f64) -> f64 {
    let mut term = 1.0 / rho;
    let mut acc = term;
    let mut prev = term.abs();
    for k in 1..ASYM_MAX_ORDER {
        let odd = 2.0 * k as f64 - 1.0;
        term *= -(odd * odd) / (rho * rho);
        if term.abs() >= prev {
            break;
        }
        acc += term;
        if term.abs() < 1e-18 {
            break;
        }
        prev = term.abs();
    }
    std::f64::consts::FRAC_2_PI * acc
}

// ---------------------------------------------------------------------------
// real-argument dispatchers

/// J0 on the real half line rho >= 0.
pub fn j0_real_with(rho: f64, policy: &SeriesPolicy) -> Result<(f64, Regime)> {
    debug_assert!(rho >= 0.0);
    if rho < policy.switch_radius {
        Ok((j0_series_dd(rho, policy)?.to_f64(), Regime::Series))
    } else {
        Ok((hankel_asym(rho, false), Regime::Asymptotic))
    }
}

/// N0 on the open half line rho > 0.
pub fn n0_real_with(rho: f64, policy: &SeriesPolicy) -> Result<(f64, Regime)> {
    if rho <= 0.0 {
        return Err(Error::BranchCut(format!("N0 at rho = {rho} <= 0")));
    }
    if rho < policy.switch_radius {
        Ok((n0_series_real(rho, policy)?, Regime::Series))
    } else {
        Ok((hankel_asym(rho, true), Regime::Asymptotic))
    }
}

/// Struve H0 on the real line (odd function).
pub fn h0_real_with(rho: f64, policy: &SeriesPolicy) -> Result<(f64, Regime)> {
    let (sign, r) = if rho < 0.0 { (-1.0, -rho) } else { (1.0, rho) };
    if r < policy.switch_radius {
        Ok((sign * h0_series_real(r, policy)?, Regime::Series))
    } else {
        let n0 = n0_real_with(r, &SeriesPolicy::bessel_default())?.0;
        Ok((sign * (n0 + struve_tail_asym(r)), Regime::Asymptotic))
    }
}

pub fn j0_real(rho: f64) -> Result<(f64, Regime)> {
    j0_real_with(rho, &SeriesPolicy::bessel_default())
}

pub fn n0_real(rho: f64) -> Result<(f64, Regime)> {
    n0_real_with(rho, &SeriesPolicy::bessel_default())
}

pub fn h0_real(rho: f64) -> Result<(f64, Regime)> {
    h0_real_with(rho, &SeriesPolicy::struve_default())
}

// ---------------------------------------------------------------------------
// complex power series

fn check_complex_bound(z: Complex64) -> Result<()> {
    if z.norm() > COMPLEX_SERIES_BOUND {
        Err(Error::NonConvergent(format!(
            "|z| = {:.3} exceeds the complex series validity bound {COMPLEX_SERIES_BOUND}",
            z.norm()
        )))
    } else {
        Ok(())
    }
}

fn j0_series_complex(z: Complex64, policy: &SeriesPolicy) -> Result<Complex64> {
    let q2 = z * z * 0.25;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut small = 0usize;
    for n in 1..=policy.max_terms {
        let nn = (n * n) as f64;
        term *= -q2 / nn;
        sum += term;
        if term.norm() <= policy.tail_tolerance * sum.norm().max(f64::MIN_POSITIVE) {
            small += 1;
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergent(format!("complex J0 series at z = {z}")))
}

fn n0_series_complex(z: Complex64, policy: &SeriesPolicy) -> Result<Complex64> {
    let q2 = z * z * 0.25;
    let mut t = Complex64::new(1.0, 0.0);
    let mut h = 0.0f64;
    let mut s = Complex64::new(0.0, 0.0);
    let mut small = 0usize;
    let mut done = false;
    for k in 1..=policy.max_terms {
        let kk = (k * k) as f64;
        t *= -q2 / kk;
        h += 1.0 / k as f64;
        let term = t * h;
        s += term;
        if term.norm() <= policy.tail_tolerance * s.norm().max(1.0) {
            small += 1;
            if small >= 2 {
                done = true;
                break;
            }
        } else {
            small = 0;
        }
    }
    if !done {
        return Err(Error::NonConvergent(format!("complex N0 series at z = {z}")));
    }
    let j0 = j0_series_complex(z, policy)?;
    // principal branch of log(z/2)
    let log_term = (z * 0.5).ln() + EULER_GAMMA;
    Ok(std::f64::consts::FRAC_2_PI * (j0 * log_term - s))
}

fn h0_series_complex(z: Complex64, policy: &SeriesPolicy) -> Result<Complex64> {
    let z2 = z * z;
    let mut t = z;
    let mut sum = t;
    let mut small = 0usize;
    for k in 1..=policy.max_terms {
        let odd = (2 * k + 1) as f64;
        t *= -z2 / (odd * odd);
        sum += t;
        if t.norm() <= policy.tail_tolerance * sum.norm().max(f64::MIN_POSITIVE) {
            small += 1;
            if small >= 2 {
                return Ok(std::f64::consts::FRAC_2_PI * sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergent(format!("complex H0 series at z = {z}")))
}

// ---------------------------------------------------------------------------
// public complex entry points

/// Bessel J0 (entire; even).
pub fn bessel_j0(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 {
        let (v, _) = j0_real(z.re.abs())?;
        return Ok(Complex64::new(v, 0.0));
    }
    check_complex_bound(z)?;
    j0_series_complex(z, &SeriesPolicy::bessel_default())
}

/// Neumann N0, principal branch (cut along (-inf, 0]).
pub fn neumann_n0(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(Error::BranchCut(format!("N0 at z = {z} on (-inf, 0]")));
    }
    if z.im == 0.0 {
        let (v, _) = n0_real(z.re)?;
        return Ok(Complex64::new(v, 0.0));
    }
    check_complex_bound(z)?;
    n0_series_complex(z, &SeriesPolicy::bessel_default())
}

/// Struve H0 (entire; odd).
pub fn struve_h0(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 {
        let (v, _) = h0_real(z.re)?;
        return Ok(Complex64::new(v, 0.0));
    }
    check_complex_bound(z)?;
    h0_series_complex(z, &SeriesPolicy::struve_default())
}
