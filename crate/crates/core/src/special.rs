//! Small special-function helpers shared across modules.

/// `ln(n!)`, summed directly for small `n` and by Stirling's series beyond.
pub fn ln_factorial(n: usize) -> f64 {
    if n < 64 {
        (2..=n).map(|k| (k as f64).ln()).sum()
    } else {
        let x = n as f64 + 1.0;
        // Stirling series for ln Γ(x), accurate to ~1e-15 for x ≥ 64
        (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x.powi(3))
            + 1.0 / (1260.0 * x.powi(5))
    }
}

/// `sqrt(p! / n!)` computed as a product of square roots over the shorter range.
pub fn sqrt_factorial_ratio(p: usize, n: usize) -> f64 {
    if p >= n {
        let mut r = 1.0;
        for k in (n + 1)..=p {
            r *= (k as f64).sqrt();
        }
        r
    } else {
        1.0 / sqrt_factorial_ratio(n, p)
    }
}

/// Upper Poisson tail `e^{-x} Σ_{n>N} x^n/n!`, the truncation defect of a unit
/// kernel vector with `x = |a|²`.
pub fn poisson_tail(x: f64, degree: usize) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let ln_term = |n: usize| -x + n as f64 * x.ln() - ln_factorial(n);
    if (degree as f64 + 1.0) > x {
        // terms decrease from n = N+1 on
        let mut sum = 0.0;
        let mut n = degree + 1;
        let mut term = ln_term(n).exp();
        while term > 0.0 && term > sum * 1e-18 {
            sum += term;
            n += 1;
            term *= x / n as f64;
        }
        sum
    } else {
        let head: f64 = (0..=degree).map(|n| ln_term(n).exp()).sum();
        (1.0 - head).max(0.0)
    }
}

/// Error function via its Taylor series for |x| < 3 and the continued-fraction
/// complement beyond. Real argument only.
pub fn erf(x: f64) -> f64 {
    if x < 0.0 {
        return -erf(-x);
    }
    if x < 3.0 {
        let mut term = x;
        let mut sum = x;
        let x2 = x * x;
        let mut n = 0usize;
        loop {
            n += 1;
            term *= -x2 / n as f64;
            let add = term / (2 * n + 1) as f64;
            sum += add;
            if add.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        2.0 / std::f64::consts::PI.sqrt() * sum
    } else {
        // Lentz evaluation of erfc continued fraction
        let mut f = x;
        let mut c = x;
        let mut d = 0.0;
        for k in 1..200 {
            let a = k as f64 / 2.0;
            d = x + a * d;
            d = 1.0 / d;
            c = x + a / c;
            let delta = c * d;
            f *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        1.0 - (-x * x).exp() / (f * std::f64::consts::PI.sqrt())
    }
}
