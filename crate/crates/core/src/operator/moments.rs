//! Closed-form moments of the power kernel t^{−(1+2α)} over a cell [t0, t0 + h].

use crate::scalar::Real;

/// Scaled moments of one far cell, with r = h/t0 and β = 1 + 2α:
/// `near = ∫₀^r (r − s)(1+s)^{−β} ds`, `far = ∫₀^r s(1+s)^{−β} ds`,
/// `bubble = ∫₀^r s(r − s)(1+s)^{−β} ds`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CellMoments<T> {
    pub near: T,
    pub far: T,
    pub bubble: T,
}

pub(crate) fn cell_moments<T: Real>(r: T, alpha: T) -> CellMoments<T> {
    let beta = T::one() + alpha + alpha;
    if r <= T::lit(0.5) {
        series(r, beta)
    } else {
        let two_a = alpha + alpha;
        let i0 = shifted_power_integral(r, -two_a);
        let i1 = shifted_power_integral(r, T::one() - two_a);
        let i2 = shifted_power_integral(r, T::lit(2.0) - two_a);
        let far = i1 - i0;
        CellMoments { near: r * i0 - far, far, bubble: r * far - (i2 - i1 - i1 + i0) }
    }
}

/// ((1 + r)^e − 1)/e, continuous at e = 0.
fn shifted_power_integral<T: Real>(r: T, e: T) -> T {
    let l = r.ln_1p();
    if e.abs() < T::lit(1e-12) {
        l
    } else {
        (e * l).exp_m1() / e
    }
}

fn series<T: Real>(r: T, beta: T) -> CellMoments<T> {
    let mut a = T::one();
    let mut rp = r * r;
    let (mut near, mut far, mut bubble) = (T::zero(), T::zero(), T::zero());
    for m in 0..200 {
        let mf = T::from_usize_lossy(m);
        let one = T::one();
        let two = T::lit(2.0);
        far = far + a * rp / (mf + two);
        near = near + a * rp / ((mf + one) * (mf + two));
        bubble = bubble + a * rp * r / ((mf + two) * (mf + T::lit(3.0)));
        a = a * (-beta - mf) / (mf + one);
        rp = rp * r;
        if (a * rp).abs() <= T::epsilon() * T::lit(1e-2) * near.abs() {
            break;
        }
    }
    CellMoments { near, far, bubble }
}

/// ∫_lo^hi t^e dt.
pub(crate) fn power_integral<T: Real>(lo: T, hi: T, e: T) -> T {
    let e1 = e + T::one();
    if e1.abs() < T::lit(1e-12) {
        (hi / lo).ln()
    } else {
        (hi.powf(e1) - lo.powf(e1)) / e1
    }
}
