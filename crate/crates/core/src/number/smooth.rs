//! C¹ interval maps given by closures, evaluated in double precision.

use std::fmt;
use std::sync::Arc;

use super::{Interval, IntervalMap, NumberError, Scalar};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type RangeFn = Arc<dyn Fn(&Interval<f64>) -> Interval<f64> + Send + Sync>;

/// Relative slack applied to closure results, which are trusted to a few ulps.
const EVAL_SLACK: f64 = 8.0 * f64::EPSILON;

/// A differentiable self-map of a compact interval.
///
/// Images of intervals use the mean-value form `f(m) + f'(J)·(J − m)`, with
/// `f'(J)` taken from the derivative-range closure when one is supplied and
/// from `[-L, L]` (the Lipschitz bound) otherwise.
#[derive(Clone)]
pub struct DifferentiableMapHandle {
    eval: RealFn,
    deriv: RealFn,
    deriv_range: Option<RangeFn>,
    domain: Interval<f64>,
    lipschitz_bound: Option<f64>,
    label: String,
}

impl fmt::Debug for DifferentiableMapHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DifferentiableMapHandle")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("lipschitz_bound", &self.lipschitz_bound)
            .finish()
    }
}

impl DifferentiableMapHandle {
    pub fn new(
        label: impl Into<String>,
        domain: Interval<f64>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
        lipschitz_bound: Option<f64>,
    ) -> Self {
        DifferentiableMapHandle {
            eval: Arc::new(eval),
            deriv: Arc::new(deriv),
            deriv_range: None,
            domain,
            lipschitz_bound,
            label: label.into(),
        }
    }

    /// Supply a rigorous enclosure of `f'` over intervals.
    pub fn with_derivative_range(
        mut self,
        range: impl Fn(&Interval<f64>) -> Interval<f64> + Send + Sync + 'static,
    ) -> Self {
        self.deriv_range = Some(Arc::new(range));
        self
    }

    /// `f_c(x) = c·x·(1 − x)` on `[0, 1]`, `c ∈ (0, 4]`.
    pub fn logistic(c: f64) -> Self {
        assert!(c > 0.0 && c <= 4.0, "logistic parameter must lie in (0, 4]");
        let domain = Interval::new(0.0, 1.0).expect("unit interval");
        DifferentiableMapHandle::new(
            format!("logistic(c={c})"),
            domain,
            move |x| c * x * (1.0 - x),
            move |x| c * (1.0 - 2.0 * x),
            Some(c),
        )
        .with_derivative_range(move |j| {
            let one = Interval::point(1.0);
            let two_x = j.scale(&2.0);
            one.sub(&two_x).scale(&c)
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn lipschitz_bound(&self) -> Option<f64> {
        self.lipschitz_bound
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn deriv(&self, x: f64) -> f64 {
        (self.deriv)(x)
    }

    fn padded(v: f64) -> Interval<f64> {
        let slack = v.abs() * EVAL_SLACK + f64::MIN_POSITIVE;
        Interval::new((v - slack).round_down(), (v + slack).round_up()).expect("finite value")
    }

    fn check_domain(&self, j: &Interval<f64>) -> Result<(), NumberError> {
        if !j.subset_of(&self.domain) {
            return Err(NumberError::Domain(j.to_string()));
        }
        Ok(())
    }

    /// Certified `f(a) < f(b)`-type comparisons for monotone inversion.
    fn value_enclosure(&self, x: f64) -> Interval<f64> {
        Self::padded(self.eval(x))
    }
}

impl IntervalMap<f64> for DifferentiableMapHandle {
    fn domain(&self) -> Interval<f64> {
        self.domain.clone()
    }

    fn image(&self, j: &Interval<f64>) -> Result<Interval<f64>, NumberError> {
        self.check_domain(j)?;
        let m = j.midpoint();
        let fm = self.value_enclosure(m);
        if j.is_point() {
            return Ok(fm.intersection(&self.domain).unwrap_or(fm));
        }
        let d = self.derivative(j)?;
        let spread = d.mul(&j.sub(&Interval::point(m)));
        let mv = fm.add(&spread);
        // f maps the domain into itself, so clipping keeps the enclosure valid
        Ok(mv.intersection(&self.domain).unwrap_or(mv))
    }

    fn derivative(&self, j: &Interval<f64>) -> Result<Interval<f64>, NumberError> {
        self.check_domain(j)?;
        if let Some(range) = &self.deriv_range {
            return Ok(range(j));
        }
        match self.lipschitz_bound {
            Some(l) => Ok(Interval::new(-l, l).expect("nonnegative bound")),
            None => Err(NumberError::InvalidMap(format!("{}: no derivative enclosure available", self.label))),
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    fn preimage_in(&self, y: &Interval<f64>, within: &Interval<f64>) -> Result<Option<Interval<f64>>, NumberError> {
        self.check_domain(within)?;
        let d = self.derivative(within)?;
        let increasing = if *d.lo() > 0.0 {
            true
        } else if *d.hi() < 0.0 {
            false
        } else {
            return Err(NumberError::NotMonotone(within.to_string()));
        };
        let img = self.image(within)?;
        if !img.intersects(y) {
            return Ok(None);
        }
        // g is increasing on `within`; find the smallest x with g(x) possibly >= lo
        // and the largest x with g(x) possibly <= hi by bisection on certified values.
        let g = |x: f64| {
            let v = self.value_enclosure(x);
            if increasing {
                v
            } else {
                v.neg()
            }
        };
        let (target_lo, target_hi) = if increasing { (*y.lo(), *y.hi()) } else { (-*y.hi(), -*y.lo()) };
        let (a, b) = (*within.lo(), *within.hi());
        // left end: last point certainly below target_lo
        let left = {
            let (mut below, mut above) = (a, b);
            if *g(a).hi() >= target_lo {
                a
            } else {
                for _ in 0..80 {
                    let mid = 0.5 * (below + above);
                    if *g(mid).hi() < target_lo {
                        below = mid
                    } else {
                        above = mid
                    }
                }
                below
            }
        };
        let right = {
            let (mut below, mut above) = (a, b);
            if *g(b).lo() <= target_hi {
                b
            } else {
                for _ in 0..80 {
                    let mid = 0.5 * (below + above);
                    if *g(mid).lo() > target_hi {
                        above = mid
                    } else {
                        below = mid
                    }
                }
                above
            }
        };
        if left > right {
            return Ok(None);
        }
        Ok(Some(Interval::new(left, right)?))
    }

    fn describe(&self) -> String {
        self.label.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logistic_derivative_matches_central_differences() {
        let f = DifferentiableMapHandle::logistic(3.2);
        let h = 1e-6;
        for i in 1..100 {
            let x = i as f64 / 100.0;
            let fd = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
            assert!((fd - f.deriv(x)).abs() < 1e-6, "x = {x}");
        }
    }

    #[test]
    fn mean_value_image_encloses_samples() {
        let f = DifferentiableMapHandle::logistic(3.7);
        let j = Interval::new(0.3, 0.45).unwrap();
        let img = f.image(&j).unwrap();
        for i in 0..=1000 {
            let x = 0.3 + 0.15 * i as f64 / 1000.0;
            assert!(img.contains(&f.eval(x)));
        }
    }

    #[test]
    fn preimage_brackets_true_solution() {
        let f = DifferentiableMapHandle::logistic(3.2);
        let within = Interval::new(0.6, 0.9).unwrap();
        let y = Interval::point(f.eval(0.75));
        let pre = f.preimage_in(&y, &within).unwrap().unwrap();
        assert!(pre.contains(&0.75));
        assert!(pre.width() < 1e-12);
        let far = Interval::point(0.01);
        assert_eq!(f.preimage_in(&far, &within).unwrap(), None);
        let straddle = Interval::new(0.4, 0.6).unwrap();
        assert!(f.preimage_in(&y, &straddle).is_err());
    }
}
