//! Centered finite-difference stencils.

/// Fourth-order centered first derivative.
pub fn d1<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// Fourth-order centered second derivative.
pub fn d2<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    // differences from f(x) first, so constants give exactly 0
    let f0 = f(x);
    (16.0 * ((f(x - h) - f0) + (f(x + h) - f0)) - ((f(x - 2.0 * h) - f0) + (f(x + 2.0 * h) - f0))) / (12.0 * h * h)
}

/// First derivative by Richardson extrapolation of second-order centered
/// differences (Ridders' tableau). Returns the estimate and its error.
pub fn d1_richardson<F: Fn(f64) -> f64>(f: F, x: f64, h0: f64) -> (f64, f64) {
    const N: usize = 8;
    const CON: f64 = 1.4;
    const CON2: f64 = CON * CON;
    let mut tab = [[0.0_f64; N]; N];
    let mut h = h0;
    tab[0][0] = (f(x + h) - f(x - h)) / (2.0 * h);
    let mut best = tab[0][0];
    let mut err = f64::MAX;
    for i in 1..N {
        h /= CON;
        tab[0][i] = (f(x + h) - f(x - h)) / (2.0 * h);
        let mut fac = CON2;
        for j in 1..=i {
            tab[j][i] = (tab[j - 1][i] * fac - tab[j - 1][i - 1]) / (fac - 1.0);
            fac *= CON2;
            let e = (tab[j][i] - tab[j - 1][i])
                .abs()
                .max((tab[j][i] - tab[j - 1][i - 1]).abs());
            if e <= err {
                err = e;
                best = tab[j][i];
            }
        }
        if (tab[i][i] - tab[i - 1][i - 1]).abs() >= 2.0 * err {
            break;
        }
    }
    (best, err)
}
