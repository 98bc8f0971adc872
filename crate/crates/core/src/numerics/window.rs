use num_complex::Complex64;

use super::gamma;
#[cfg(test)]
use super::simpson;

/// Test functions W on (0, ∞) with their Mellin transforms Ŵ(s) = ∫ W(y) y^{s−1} dy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Window {
    Zero,
    /// exp(−1/(1−u²)) after mapping [lo, hi] onto [−1, 1].
    Bump { lo: f64, hi: f64 },
    /// e^{−y}, whose transform is Γ(s).
    Exponential,
}

const BUMP_PANELS: usize = 600;

impl Window {
    /// The standard bump on [1, 2].
    pub fn unit_bump() -> Window {
        Window::Bump { lo: 1.0, hi: 2.0 }
    }

    pub fn eval(&self, y: f64) -> f64 {
        match *self {
            Window::Zero => 0.0,
            Window::Bump { lo, hi } => {
                if y <= lo || y >= hi {
                    return 0.0;
                }
                let u = (2.0 * y - lo - hi) / (hi - lo);
                (-1.0 / (1.0 - u * u)).exp()
            }
            Window::Exponential => (-y).exp(),
        }
    }

    /// Largest y with W(y) > tol, used to bound sums.
    pub fn support_end(&self, tol: f64) -> f64 {
        match *self {
            Window::Zero => 0.0,
            Window::Bump { hi, .. } => hi,
            Window::Exponential => -tol.ln(),
        }
    }

    pub fn mellin(&self, s: Complex64) -> Complex64 {
        match *self {
            Window::Zero => Complex64::new(0.0, 0.0),
            Window::Bump { lo, hi } => {
                // trapezoid in t = ln y; the integrand is flat at both ends so this converges fast
                let (a, b) = (lo.ln(), hi.ln());
                let m = BUMP_PANELS + (3.0 * s.im.abs() * (b - a)).ceil() as usize;
                let h = (b - a) / m as f64;
                let mut sum = Complex64::new(0.0, 0.0);
                for k in 1..m {
                    let t = a + k as f64 * h;
                    sum += (s * t).exp() * self.eval(t.exp());
                }
                sum * h
            }
            Window::Exponential => gamma(s),
        }
    }

    /// Residue of Ŵ at s = 0 (nonzero only for windows that do not vanish near 0).
    pub fn residue_at_zero(&self) -> f64 {
        match self {
            Window::Exponential => 1.0,
            _ => 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_shape() {
        let w = Window::unit_bump();
        assert_eq!(w.eval(1.0), 0.0);
        assert_eq!(w.eval(2.5), 0.0);
        assert!((w.eval(1.5) - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(Window::Zero.mellin(Complex64::new(0.5, 1.0)), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn bump_mellin_converged() {
        let w = Window::Bump { lo: 0.5, hi: 2.5 };
        for &(re, im) in &[(1.0, 0.0), (0.5, 3.0), (-1.0, 10.0)] {
            let s = Complex64::new(re, im);
            let coarse = simpson(|y| ((s - 1.0) * y.ln()).exp() * w.eval(y), 0.5, 2.5, 500);
            let fine = w.mellin(s);
            assert!((coarse - fine).norm() < 1e-10, "{s}: {coarse} {fine}");
        }
        // high up the line against a fine Simpson rule in y
        let s = Complex64::new(0.5, 400.0);
        let fine = simpson(|y| ((s - 1.0) * y.ln()).exp() * w.eval(y), 0.5, 2.5, 200_000);
        assert!((w.mellin(s) - fine).norm() < 1e-10, "{} {}", w.mellin(s), fine);
        // Ŵ(1) is the integral of W
        let total = simpson(|y| Complex64::new(w.eval(y), 0.0), 0.5, 2.5, 4000);
        assert!((w.mellin(Complex64::new(1.0, 0.0)) - total).norm() < 1e-12);
    }
}
