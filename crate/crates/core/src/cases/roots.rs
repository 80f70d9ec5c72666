/// Bisection on a sign change of `f` over `[lo, hi]` down to `1e-13`.
/// `None` if the endpoints do not bracket or `f` is undefined at a probe.
pub fn bisect(f: impl Fn(f64) -> Option<f64>, mut lo: f64, mut hi: f64) -> Option<f64> {
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if (flo > 0.0) == (fhi > 0.0) {
        return None;
    }
    for _ in 0..200 {
        if hi - lo <= 1e-13 {
            break;
        }
        let m = 0.5 * (lo + hi);
        let fm = f(m)?;
        if fm == 0.0 {
            return Some(m);
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = m;
            flo = fm;
        } else {
            hi = m;
        }
    }
    Some(0.5 * (lo + hi))
}

/// First sign change of `f` along `lo, lo + step, ..., hi`, refined by bisection.
/// Probes where `f` is undefined break the bracket.
pub fn scan_root(f: impl Fn(f64) -> Option<f64>, lo: f64, hi: f64, step: f64) -> Option<f64> {
    scan_root_where(f, lo, hi, step, |_| true)
}

/// As [`scan_root`], skipping refined roots rejected by `accept`.
pub fn scan_root_where(
    f: impl Fn(f64) -> Option<f64>,
    lo: f64,
    hi: f64,
    step: f64,
    accept: impl Fn(f64) -> bool,
) -> Option<f64> {
    let n = ((hi - lo) / step).round().max(1.0) as usize;
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..=n {
        let x = lo + (hi - lo) * k as f64 / n as f64;
        let v = f(x);
        if let (Some(v), Some((px, pv))) = (v, prev) {
            if v == 0.0 && accept(x) {
                return Some(x);
            }
            if (v > 0.0) != (pv > 0.0) {
                if let Some(r) = bisect(&f, px, x).filter(|&r| accept(r)) {
                    return Some(r);
                }
            }
        }
        prev = v.map(|v| (x, v));
    }
    None
}
