//! Derivative-free scalar minimization.

/// Result of a one-dimensional minimization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search on `[a, b]` down to an interval of width `tol`.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Minimum {
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        Minimum { x: c, value: fc }
    } else {
        Minimum { x: d, value: fd }
    }
}

/// Uniform scan with `samples` points followed by golden-section refinement
/// inside the bracket around the best sample.
///
/// The scan guards against multimodal objectives, e.g. the L¹ distance of
/// a bimodal Gibbs density to a single Gaussian.
pub fn scan_then_golden<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    samples: usize,
    tol: f64,
) -> Minimum {
    let samples = samples.max(3);
    let step = (b - a) / (samples - 1) as f64;
    let (best, _) = (0..samples)
        .map(|i| (i, f(a + i as f64 * step)))
        .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
    let lo = a + best.saturating_sub(1) as f64 * step;
    let hi = a + (best + 1).min(samples - 1) as f64 * step;
    golden_section(f, lo, hi, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola() {
        let m = golden_section(|x| (x - 0.3).powi(2) + 1.0, -2.0, 5.0, 1e-10);
        assert!((m.x - 0.3).abs() < 1e-7);
        assert!((m.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn v_shape() {
        let m = golden_section(|x| (x + 1.25).abs(), -3.0, 3.0, 1e-9);
        assert!((m.x + 1.25).abs() < 1e-8);
    }

    #[test]
    fn scan_escapes_local_minimum() {
        // local minimum near x = -1, global at x = 2
        let f = |x: f64| ((x + 1.0).powi(2) * (x - 2.0).powi(2)) - 0.5 * x;
        let m = scan_then_golden(f, -3.0, 3.0, 61, 1e-10);
        assert!(m.x > 1.5, "x = {}", m.x);
    }
}
