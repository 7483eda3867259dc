//! Exponent intervals with optional infinite ends.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Inclusive exponent interval; `None` marks an infinite end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub lo: Option<i32>,
    pub hi: Option<i32>,
}

/// Extended integer used for interval arithmetic.
pub(crate) const INF: i64 = 1 << 40;

impl Window {
    pub const ALL: Window = Window { lo: None, hi: None };

    pub fn new(lo: i32, hi: i32) -> Self {
        assert!(lo <= hi, "empty window {lo}..{hi}");
        Window { lo: Some(lo), hi: Some(hi) }
    }

    pub fn point(k: i32) -> Self {
        Window::new(k, k)
    }

    pub fn at_least(lo: i32) -> Self {
        Window { lo: Some(lo), hi: None }
    }

    pub fn at_most(hi: i32) -> Self {
        Window { lo: None, hi: Some(hi) }
    }

    pub(crate) fn lo_ext(&self) -> i64 {
        self.lo.map_or(-INF, i64::from)
    }

    pub(crate) fn hi_ext(&self) -> i64 {
        self.hi.map_or(INF, i64::from)
    }

    /// From extended bounds; `None` if empty.
    pub(crate) fn from_ext(lo: i64, hi: i64) -> Option<Self> {
        let lo = lo.max(-INF);
        let hi = hi.min(INF);
        if lo > hi {
            return None;
        }
        let conv = |x: i64| if x.abs() >= INF { None } else { Some(x as i32) };
        Some(Window { lo: conv(lo), hi: conv(hi) })
    }

    pub fn contains(&self, k: i32) -> bool {
        self.lo.is_none_or(|l| k >= l) && self.hi.is_none_or(|h| k <= h)
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }

    pub fn intersect(&self, o: &Window) -> Option<Window> {
        Window::from_ext(self.lo_ext().max(o.lo_ext()), self.hi_ext().min(o.hi_ext()))
    }

    pub fn hull(&self, o: &Window) -> Window {
        Window::from_ext(self.lo_ext().min(o.lo_ext()), self.hi_ext().max(o.hi_ext())).unwrap()
    }

    /// Minkowski sum.
    pub fn sum(&self, o: &Window) -> Window {
        Window::from_ext(ext_add(self.lo_ext(), o.lo_ext()), ext_add(self.hi_ext(), o.hi_ext())).unwrap()
    }

    pub fn shift(&self, k: i32) -> Window {
        Window { lo: self.lo.map(|l| l + k), hi: self.hi.map(|h| h + k) }
    }

    pub fn negate(&self) -> Window {
        Window { lo: self.hi.map(|h| -h), hi: self.lo.map(|l| -l) }
    }

    /// Number of exponents, `None` if unbounded.
    pub fn len(&self) -> Option<i64> {
        Some(i64::from(self.hi?) - i64::from(self.lo?) + 1)
    }
}

pub(crate) fn ext_add(a: i64, b: i64) -> i64 {
    if a <= -INF || b <= -INF {
        -INF
    } else if a >= INF || b >= INF {
        INF
    } else {
        (a + b).clamp(-INF, INF)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = self.lo.map_or("-inf".to_string(), |l| l.to_string());
        let hi = self.hi.map_or("+inf".to_string(), |h| h.to_string());
        write!(f, "[{lo}, {hi}]")
    }
}

/// Largest interval on which the product of two series with the given
/// known windows `w*` and support hulls `s*` is exactly determined.
///
/// A coefficient `c_p = Σ a_i b_{p-i}` is tainted when some `a_i` is
/// unknown while `b_{p-i}` may be nonzero, or the other way round.
pub(crate) fn product_window(wa: &Window, sa: &Window, wb: &Window, sb: &Window) -> Option<Window> {
    let mut taints: Vec<(i64, i64)> = Vec::new();
    for (w, s, so) in [(wa, sa, sb), (wb, sb, sa)] {
        if s.lo_ext() < w.lo_ext() {
            taints.push((ext_add(s.lo_ext(), so.lo_ext()), ext_add(w.lo_ext() - 1, so.hi_ext())));
        }
        if s.hi_ext() > w.hi_ext() {
            taints.push((ext_add(w.hi_ext() + 1, so.lo_ext()), ext_add(s.hi_ext(), so.hi_ext())));
        }
    }
    let support = sa.sum(sb);
    complement_best(&taints, &support)
}

/// Chooses the component of `Z \ ∪ taints` overlapping `support` most.
pub(crate) fn complement_best(taints: &[(i64, i64)], support: &Window) -> Option<Window> {
    let mut t: Vec<(i64, i64)> = taints.iter().copied().filter(|(a, b)| a <= b).collect();
    t.sort();
    let mut comps = Vec::new();
    let mut cursor = -INF;
    for (a, b) in t {
        if a > cursor {
            comps.push((cursor, a - 1));
        }
        cursor = cursor.max(b.saturating_add(1));
        if cursor > INF {
            break;
        }
    }
    if cursor <= INF {
        comps.push((cursor, INF));
    }
    let measure = |(a, b): (i64, i64)| -> i64 {
        let lo = a.max(support.lo_ext());
        let hi = b.min(support.hi_ext());
        if lo > hi {
            -1
        } else {
            (hi - lo).min(INF)
        }
    };
    let mut best: Option<((i64, i64), i64)> = None;
    for c in comps {
        let m = measure(c);
        if m < 0 {
            continue;
        }
        if best.is_none_or(|(_, bm)| m > bm) {
            best = Some((c, m));
        }
    }
    best.and_then(|((a, b), _)| Window::from_ext(a, b))
}

/// Whether `Σ_i a_i b_{p-i}` has finitely many possibly nonzero terms.
pub(crate) fn product_is_finite(sa: &Window, sb: &Window) -> bool {
    (sa.lo.is_some() || sb.hi.is_some()) && (sa.hi.is_some() || sb.lo.is_some())
}
