/// `L_n(x)` by the three-term recurrence `(k+1)L_{k+1} = (2k+1-x)L_k - kL_{k-1}`.
pub fn laguerre(n: usize, x: f64) -> f64 {
    laguerre_pair(n, x).0
}

/// `(L_n(x), L_{n-1}(x))`, with `L_{-1} = 0`.
pub fn laguerre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut curr = 1.0;
    let mut prev = 0.0;
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * curr - kf * prev) / (kf + 1.0);
        prev = curr;
        curr = next;
    }
    (curr, prev)
}

/// `L_n'(x) = -Σ_{k<n} L_k(x)`, regular at `x = 0`.
pub fn laguerre_derivative(n: usize, x: f64) -> f64 {
    let mut sum = 0.0;
    let mut curr = 1.0;
    let mut prev = 0.0;
    for k in 0..n {
        sum -= curr;
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * curr - kf * prev) / (kf + 1.0);
        prev = curr;
        curr = next;
    }
    sum
}
