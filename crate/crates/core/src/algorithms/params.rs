//! Integer palette and class-count parameters. The real-valued thresholds
//! are rounded up; every value here is computed exactly rather than through
//! a floating-point `ceil`.

/// `k^(d+1) >= n * d^(d+1)`, i.e. `k >= d * n^(1/(d+1))`, without overflow.
fn covers_root(k: u128, n: u128, d: u32) -> bool {
    let lhs = k.checked_pow(d + 1);
    let rhs = (d as u128).checked_pow(d + 1).and_then(|p| p.checked_mul(n));
    match (lhs, rhs) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(l), Some(r)) => l >= r,
    }
}

/// Step-1 palette size of the high-girth algorithm: `ceil(d * n^(1/(d+1)))`,
/// at least 1.
pub fn bnd_palette(n: usize, d: usize) -> usize {
    let (nn, dd) = (n as u128, d as u32);
    let guess = (d as f64 * (n as f64).powf(1.0 / (d as f64 + 1.0))).ceil().max(1.0) as u128;
    let mut k = guess;
    while k > 1 && covers_root(k - 1, nn, dd) {
        k -= 1;
    }
    while !covers_root(k, nn, dd) {
        k += 1;
    }
    k.max(1) as usize
}

/// `sum_{l=1..d} C(k, l)`, saturating.
pub fn witness_lower_bound(k: usize, d: usize) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for l in 1..=d.min(k) {
        // C(k, l) = C(k, l-1) * (k - l + 1) / l, exact at every step.
        binom = match binom.checked_mul((k - l + 1) as u128) {
            Some(b) => b / l as u128,
            None => return u128::MAX,
        };
        total = total.saturating_add(binom);
    }
    total
}

/// Most witness classes the high-girth algorithm can open on a conforming
/// input: classes are disjoint and each holds at least
/// [`witness_lower_bound`] vertices.
pub fn bnd_class_cap(n: usize, d: usize) -> usize {
    let per_class = witness_lower_bound(bnd_palette(n, d), d).max(1);
    (n as u128 / per_class) as usize
}

/// Per-H-class palette width `ceil(2 log2 d)`: least `b` with `2^b >= d^2`.
pub fn bo_palette_width(d: usize) -> usize {
    let sq = (d as u128) * (d as u128);
    let mut b = 0;
    while (1u128 << b) < sq {
        b += 1;
    }
    b
}

/// Number of H-classes `ceil((n / (d log2 d))^(1/2))`, at least 1.
pub fn bo_classes(n: usize, d: usize) -> usize {
    let denom = d as f64 * (d as f64).log2();
    let target = n as f64 / denom;
    let mut r = target.sqrt().floor().max(1.0) as usize;
    // Tolerance keeps exact squares (e.g. d a power of two) from rounding up.
    while ((r * r) as f64) < target * (1.0 - 1e-12) {
        r += 1;
    }
    while r > 1 && (((r - 1) * (r - 1)) as f64) >= target * (1.0 - 1e-12) {
        r -= 1;
    }
    r
}

/// Witness-class count the online odd-girth algorithm is allowed:
/// `ceil(2n / (r d)) + 1`.
pub fn bo_class_cap(n: usize, d: usize, r: usize) -> usize {
    (2 * n).div_ceil(r * d) + 1
}

/// Number of H-classes of the offline variant, `ceil((n / (2d))^(1/2))`.
pub fn offline_classes(n: usize, d: usize) -> usize {
    let mut r = 1;
    while 2 * d * r * r < n {
        r += 1;
    }
    r
}

/// `max(1, floor(2 log2 n))`: most colors Algorithm A can use on `n` vertices.
pub fn a_palette_cap(n: usize) -> usize {
    if n <= 1 {
        return 1;
    }
    let sq = (n as u128) * (n as u128);
    (127 - sq.leading_zeros()) as usize
}
