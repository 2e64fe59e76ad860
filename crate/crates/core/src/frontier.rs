//! Pareto filtering of (rate, distortion) points.

/// Anything that can be placed on the rate-distortion plane.
pub trait Tradeoff {
    fn rate(&self) -> f64;
    fn distortion(&self) -> f64;
}

/// Points not dominated in (maximize rate, minimize distortion), sorted by
/// distortion ascending. Along the result the rate is strictly increasing.
///
/// Ties keep the earliest point, so the output is deterministic in the input
/// order.
pub fn pareto<P: Tradeoff>(mut points: Vec<P>) -> Vec<P> {
    points.retain(|p| p.rate().is_finite() && p.distortion().is_finite());
    // stable: equal keys keep input order
    points.sort_by(|a, b| {
        a.distortion()
            .total_cmp(&b.distortion())
            .then(b.rate().total_cmp(&a.rate()))
    });
    let mut out: Vec<P> = Vec::new();
    for p in points {
        match out.last() {
            Some(last) if p.rate() <= last.rate() => {}
            _ => out.push(p),
        }
    }
    out
}

/// Vertices of the upper concave envelope of a Pareto set in the (D, R)
/// plane; every point on the envelope is reachable by time-sharing two
/// neighbouring vertices.
pub fn concave_envelope<P: Tradeoff>(points: Vec<P>) -> Vec<P> {
    let sorted = pareto(points);
    let mut hull: Vec<P> = Vec::with_capacity(sorted.len());
    for p in sorted {
        while hull.len() >= 2 {
            let a = &hull[hull.len() - 2];
            let b = &hull[hull.len() - 1];
            // drop b when it lies on or below the chord a→p
            let cross = (b.distortion() - a.distortion()) * (p.rate() - a.rate())
                - (b.rate() - a.rate()) * (p.distortion() - a.distortion());
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

/// Largest rate among frontier points with distortion at most `d`.
pub fn rate_at<P: Tradeoff>(frontier: &[P], d: f64) -> Option<f64> {
    frontier
        .iter()
        .filter(|p| p.distortion() <= d)
        .map(|p| p.rate())
        .fold(None, |m, r| Some(m.map_or(r, |m: f64| m.max(r))))
}

/// Rate achieved by time-sharing along a concave envelope at distortion `d`.
pub fn envelope_rate_at<P: Tradeoff>(envelope: &[P], d: f64) -> Option<f64> {
    let first = envelope.first()?;
    if d < first.distortion() {
        return None;
    }
    for w in envelope.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if d <= b.distortion() {
            let t = (d - a.distortion()) / (b.distortion() - a.distortion());
            return Some(a.rate() + t * (b.rate() - a.rate()));
        }
    }
    envelope.last().map(|p| p.rate())
}

/// `count` log-spaced distortion targets from `lo` to `hi` inclusive.
pub fn log_targets(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![hi],
        _ => {
            let (l, h) = (lo.ln(), hi.ln());
            (0..count)
                .map(|k| (l + (h - l) * k as f64 / (count - 1) as f64).exp())
                .collect()
        }
    }
}

/// Index of the first target `>= d`, or `targets.len() - 1` past the end.
pub fn bucket_of(targets: &[f64], d: f64) -> usize {
    targets
        .iter()
        .position(|&t| d <= t)
        .unwrap_or(targets.len().saturating_sub(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[derive(Debug, Clone, Copy, PartialEq)]
    struct Pt(f64, f64);

    impl Tradeoff for Pt {
        fn rate(&self) -> f64 {
            self.0
        }
        fn distortion(&self) -> f64 {
            self.1
        }
    }

    #[test]
    fn pareto_drops_dominated_points() {
        let pts = vec![Pt(1.0, 1.0), Pt(0.5, 2.0), Pt(2.0, 2.0), Pt(0.0, 0.5)];
        let f = pareto(pts);
        assert_eq!(f, vec![Pt(0.0, 0.5), Pt(1.0, 1.0), Pt(2.0, 2.0)]);
    }

    #[test]
    fn envelope_removes_non_concave_vertex() {
        let pts = vec![Pt(0.0, 0.0), Pt(0.1, 1.0), Pt(2.0, 2.0)];
        let env = concave_envelope(pts);
        assert_eq!(env, vec![Pt(0.0, 0.0), Pt(2.0, 2.0)]);
        assert_eq!(envelope_rate_at(&env, 1.0), Some(1.0));
        assert_eq!(rate_at(&env, 1.0), Some(0.0));
        assert_eq!(rate_at(&env, -1.0), None);
    }

    #[test]
    fn targets_are_log_spaced() {
        let t = log_targets(0.01, 3.0, 64);
        assert_eq!(t.len(), 64);
        assert!((t[0] - 0.01).abs() < 1e-15 && (t[63] - 3.0).abs() < 1e-12);
        assert_eq!(bucket_of(&t, 0.0), 0);
        assert_eq!(bucket_of(&t, 10.0), 63);
    }

    proptest! {
        #[test]
        fn frontier_is_mutually_non_dominated(raw in prop::collection::vec((0.0f64..2.0, 0.0f64..3.0), 0..60)) {
            let pts: Vec<Pt> = raw.into_iter().map(|(r, d)| Pt(r, d)).collect();
            let f = pareto(pts.clone());
            for (i, a) in f.iter().enumerate() {
                for (j, b) in f.iter().enumerate() {
                    if i != j {
                        let dominates = a.0 >= b.0 && a.1 <= b.1;
                        prop_assert!(!dominates);
                    }
                }
            }
            for w in f.windows(2) {
                prop_assert!(w[0].1 <= w[1].1 && w[0].0 < w[1].0);
            }
            // every input is dominated by (or equal to) some frontier point
            for p in &pts {
                prop_assert!(f.iter().any(|q| q.0 >= p.0 && q.1 <= p.1));
            }
            let env = concave_envelope(pts);
            for w in env.windows(3) {
                let s1 = (w[1].0 - w[0].0) / (w[1].1 - w[0].1);
                let s2 = (w[2].0 - w[1].0) / (w[2].1 - w[1].1);
                prop_assert!(s2 < s1 + 1e-12);
            }
        }
    }
}
