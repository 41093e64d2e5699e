//! Hodge types, Hodge and Newton polygons, the critical-interval flag, and
//! the Panchishkin midpoint check, together with SVG/TSV plot emission.
//!
//! Purity p_i + q_i = n - 1 is enforced: the interpolating p-sequence
//! (kappa_i + n - i - b)_{i<=a} followed by (-kappa^c_{b+1-j} + b - j)_{j<=b}
//! matches the printed first and last entries of each block and is completed
//! to the full length-2n list by the purity mirror.

use crate::error::{Error, Result};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

pub type Q = Ratio<i64>;

fn q_of(n: i64) -> Q {
    Ratio::from_integer(n)
}

/// Hodge numbers at one place: 2n pairs (p_i, q_i), each pure of weight n-1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeData {
    pub n: u32,
    /// (p_i, q_i) for i = 1..2n with p_i + q_i = n - 1.
    pub pairs: Vec<(i64, i64)>,
    /// Critical-interval hypothesis: p_i > q_i exactly for i <= n.
    pub critint: bool,
}

/// A piecewise-linear polygon: vertices with strictly increasing rational x.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    pub vertices: Vec<(Q, Q)>,
}

/// The multiset of Satake values at w, kept as exact valuations (the unit
/// parts never enter the polygon).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckePolynomial {
    /// Residue field cardinality q_w.
    pub q: u64,
    /// val(alpha_{w,i}) for i = 1..n (rational; half-integers occur).
    pub alpha_vals: Vec<Q>,
}

/// Hodge types from the weight vectors at one place: the first-half
/// p-sequence (kappa_i + n - i - b)_{i=1..a} then (-kappa^c_{b+1-j} + b - j),
/// q_i = n - 1 - p_i, second half mirrored by purity. Also flags the
/// critical-interval hypothesis 2 kappa_a > n-1 and -2 kappa^c_1 > n-1.
pub fn hodge_types(kappa: &[i64], kappa_c: &[i64], a: u32, b: u32) -> Result<HodgeData> {
    if kappa.len() != a as usize || kappa_c.len() != b as usize {
        return Err(Error::Schema(format!(
            "hodge_types wants {} kappa entries and {} kappa_c entries",
            a, b
        )));
    }
    let n = a + b;
    let nn = n as i64;
    let mut p_first = Vec::with_capacity(n as usize);
    for (i, k) in kappa.iter().enumerate() {
        // i is 0-based; the formula uses 1-based i.
        p_first.push(k + nn - (i as i64 + 1) - b as i64);
    }
    for j in 1..=b as i64 {
        p_first.push(-kappa_c[(b as i64 - j) as usize] + b as i64 - j);
    }
    let mut pairs: Vec<(i64, i64)> = p_first.iter().map(|&p| (p, nn - 1 - p)).collect();
    // Mirror: p_{2n+1-i} = q_i.
    let mirror: Vec<(i64, i64)> = p_first.iter().rev().map(|&p| (nn - 1 - p, p)).collect();
    pairs.extend(mirror);
    let critint = match (kappa.last(), kappa_c.first()) {
        (Some(&ka), Some(&kc1)) => 2 * ka > nn - 1 && -2 * kc1 > nn - 1,
        // A vanishing block leaves one of the defining inequalities empty;
        // the hypothesis is then read off the remaining block alone.
        (Some(&ka), None) => 2 * ka > nn - 1,
        (None, Some(&kc1)) => -2 * kc1 > nn - 1,
        (None, None) => false,
    };
    Ok(HodgeData { n, pairs, critint })
}

/// Hodge polygon over all sigma above w: vertices (i, sum_sigma partial sums
/// of the p-sequences), i = 0..2n.
pub fn hodge_polygon(data: &[HodgeData]) -> Result<Polygon> {
    let n = data
        .first()
        .map(|d| d.n)
        .ok_or_else(|| Error::Schema("hodge_polygon needs at least one place".into()))?;
    if data.iter().any(|d| d.n != n) {
        return Err(Error::Mismatch("all places above w must share n".into()));
    }
    let mut vertices = vec![(q_of(0), q_of(0))];
    let mut acc = 0i64;
    for i in 0..(2 * n as usize) {
        for d in data {
            acc += d.pairs[i].0;
        }
        vertices.push((q_of(i as i64 + 1), q_of(acc)));
    }
    Ok(Polygon { vertices })
}

/// Newton polygon of H_w(T) = prod (1 - alpha_i T)(1 - alpha_i^{-1} T):
/// the sorted slope multiset {val alpha_i, -val alpha_i} accumulated from the
/// origin (equivalently the lower convex hull of coefficient valuations).
pub fn newton_polygon(h: &HeckePolynomial) -> Polygon {
    let mut slopes: Vec<Q> = Vec::with_capacity(2 * h.alpha_vals.len());
    for v in &h.alpha_vals {
        slopes.push(*v);
        slopes.push(-*v);
    }
    slopes.sort();
    let mut vertices = vec![(q_of(0), q_of(0))];
    let mut acc = q_of(0);
    for (i, s) in slopes.iter().enumerate() {
        acc += s;
        vertices.push((q_of(i as i64 + 1), acc));
    }
    Polygon { vertices }
}

/// Lower convex hull of arbitrary points (used as an independent oracle for
/// the slope construction): Andrew monotone chain, lower half only.
pub fn lower_convex_hull(points: &[(Q, Q)]) -> Vec<(Q, Q)> {
    let mut pts = points.to_vec();
    pts.sort();
    let mut hull: Vec<(Q, Q)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // Keep b only if it lies strictly below the chord a -> p.
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= q_of(0) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

impl Polygon {
    pub fn span(&self) -> Option<(Q, Q)> {
        Some((self.vertices.first()?.0, self.vertices.last()?.0))
    }

    /// Piecewise-linear ordinate at x; None outside the span.
    pub fn ordinate_at(&self, x: Q) -> Option<Q> {
        for w in self.vertices.windows(2) {
            let (x0, y0) = w[0];
            let (x1, y1) = w[1];
            if x0 <= x && x <= x1 {
                if x1 == x0 {
                    return Some(y0);
                }
                return Some(y0 + (y1 - y0) * (x - x0) / (x1 - x0));
            }
        }
        if self.vertices.len() == 1 && self.vertices[0].0 == x {
            return Some(self.vertices[0].1);
        }
        None
    }
}

/// True iff both polygons span [0, 2n] and pass through x = n at the same
/// ordinate (the Hodge midpoint).
pub fn panchishkin_check(newton: &Polygon, hodge: &Polygon, n: u32) -> Result<bool> {
    let lo = q_of(0);
    let hi = q_of(2 * n as i64);
    for (label, poly) in [("newton", newton), ("hodge", hodge)] {
        match poly.span() {
            Some((a, b)) if a <= lo && hi <= b => {}
            _ => {
                return Err(Error::Domain(format!(
                    "{label} polygon does not span [0, {}]",
                    2 * n
                )))
            }
        }
    }
    let x = q_of(n as i64);
    Ok(newton.ordinate_at(x) == hodge.ordinate_at(x))
}

fn q_to_string(x: Q) -> String {
    if *x.denom() == 1 {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Tab-separated vertex table: header then one `x<TAB>y` line per vertex.
pub fn polygon_to_tsv(poly: &Polygon) -> String {
    let mut out = String::from("x\ty\n");
    for (x, y) in &poly.vertices {
        let _ = writeln!(out, "{}\t{}", q_to_string(*x), q_to_string(*y));
    }
    out
}

/// Static SVG plot of labelled polygons (polyline per polygon, shared axes).
pub fn polygons_to_svg(polys: &[(&str, &Polygon)]) -> String {
    let mut min_x = f64::MAX;
    let mut max_x = f64::MIN;
    let mut min_y = f64::MAX;
    let mut max_y = f64::MIN;
    for (_, p) in polys {
        for (x, y) in &p.vertices {
            let (xf, yf) = (ratio_f64(*x), ratio_f64(*y));
            min_x = min_x.min(xf);
            max_x = max_x.max(xf);
            min_y = min_y.min(yf);
            max_y = max_y.max(yf);
        }
    }
    if polys.iter().all(|(_, p)| p.vertices.is_empty()) {
        return String::from("<svg xmlns=\"http://www.w3.org/2000/svg\"/>\n");
    }
    let (w, h) = (480.0, 360.0);
    let pad = 40.0;
    let sx = |x: f64| {
        if max_x > min_x {
            pad + (x - min_x) / (max_x - min_x) * (w - 2.0 * pad)
        } else {
            w / 2.0
        }
    };
    let sy = |y: f64| {
        if max_y > min_y {
            h - pad - (y - min_y) / (max_y - min_y) * (h - 2.0 * pad)
        } else {
            h / 2.0
        }
    };
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    );
    for (k, (label, p)) in polys.iter().enumerate() {
        let color = colors[k % colors.len()];
        let pts: Vec<String> = p
            .vertices
            .iter()
            .map(|(x, y)| format!("{:.2},{:.2}", sx(ratio_f64(*x)), sy(ratio_f64(*y))))
            .collect();
        let _ = writeln!(
            out,
            "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>",
            pts.join(" ")
        );
        let _ = writeln!(
            out,
            "  <text x=\"{:.2}\" y=\"{:.2}\" fill=\"{color}\" font-size=\"12\">{label}</text>",
            pad,
            pad / 2.0 + 14.0 * k as f64
        );
        for (x, y) in &p.vertices {
            let _ = writeln!(
                out,
                "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>",
                sx(ratio_f64(*x)),
                sy(ratio_f64(*y))
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

fn ratio_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// JSON wire form of a polygon: vertices as rational strings.
#[derive(Serialize, Deserialize)]
struct PolygonWire {
    vertices: Vec<(String, String)>,
}

impl Serialize for Polygon {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolygonWire {
            vertices: self
                .vertices
                .iter()
                .map(|(x, y)| (q_to_string(*x), q_to_string(*y)))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polygon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = PolygonWire::deserialize(d)?;
        let parse = |t: &str| -> std::result::Result<Q, D::Error> {
            t.parse::<Q>()
                .map_err(|_| serde::de::Error::custom(format!("bad rational {t}")))
        };
        let mut vertices = Vec::with_capacity(w.vertices.len());
        for (x, y) in &w.vertices {
            vertices.push((parse(x)?, parse(y)?));
        }
        Ok(Polygon { vertices })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hodge_types_oracle() {
        // n=2, a=b=1, kappa=(2), kappa_c=(-2): p-sequence (2,2), q=(-1,-1).
        let h = hodge_types(&[2], &[-2], 1, 1).unwrap();
        assert_eq!(h.pairs[..2], [(2, -1), (2, -1)]);
        // Mirrored second half.
        assert_eq!(h.pairs[2..], [(-1, 2), (-1, 2)]);
        assert!(h.critint);
        // kappa=(1), kappa_c=(0): 2*1 > 1 but -2*0 = 0 < 1.
        assert!(!hodge_types(&[1], &[0], 1, 1).unwrap().critint);
        // Purity holds everywhere.
        for (p, q) in &h.pairs {
            assert_eq!(p + q, 1);
        }
    }

    #[test]
    fn hodge_types_printed_extremes() {
        // First entry kappa_1 - b + n - 1; block boundary entry -kappa^c_1 + b - 1 ...
        // last first-half entry -kappa^c_1 (j = b).
        let (a, b) = (2u32, 2u32);
        let kappa = [5, 3];
        let kappa_c = [-1, -4];
        let h = hodge_types(&kappa, &kappa_c, a, b).unwrap();
        let n = (a + b) as i64;
        assert_eq!(h.pairs[0].0, kappa[0] - b as i64 + n - 1);
        assert_eq!(h.pairs[(a + b) as usize - 1].0, -kappa_c[0]);
    }

    #[test]
    fn hodge_polygon_partial_sums() {
        let d = HodgeData {
            n: 2,
            pairs: vec![(2, -1), (2, -1), (-1, 2), (-1, 2)],
            critint: true,
        };
        let poly = hodge_polygon(std::slice::from_ref(&d)).unwrap();
        let expect: Vec<(Q, Q)> = [(0, 0), (1, 2), (2, 4), (3, 3), (4, 2)]
            .iter()
            .map(|&(x, y)| (Ratio::from_integer(x), Ratio::from_integer(y)))
            .collect();
        assert_eq!(poly.vertices, expect);
        // Two identical places double the ordinates.
        let poly2 = hodge_polygon(&[d.clone(), d]).unwrap();
        for (v1, v2) in poly.vertices.iter().zip(&poly2.vertices) {
            assert_eq!(v2.1, v1.1 * Ratio::from_integer(2));
        }
        // All p_i = 0: the zero polygon.
        let z = HodgeData { n: 1, pairs: vec![(0, 0), (0, 0)], critint: false };
        let zp = hodge_polygon(&[z]).unwrap();
        assert!(zp.vertices.iter().all(|(_, y)| *y == Ratio::from_integer(0)));
    }

    #[test]
    fn newton_polygon_oracles() {
        // n=1, val(alpha)=1: vertices (0,0),(1,-1),(2,0).
        let h = HeckePolynomial { q: 5, alpha_vals: vec![Ratio::from_integer(1)] };
        let p = newton_polygon(&h);
        let expect: Vec<(Q, Q)> = [(0, 0), (1, -1), (2, 0)]
            .iter()
            .map(|&(x, y)| (Ratio::from_integer(x), Ratio::from_integer(y)))
            .collect();
        assert_eq!(p.vertices, expect);
        // All units: flat along y=0.
        let flat = newton_polygon(&HeckePolynomial {
            q: 5,
            alpha_vals: vec![Ratio::from_integer(0); 3],
        });
        assert!(flat.vertices.iter().all(|(_, y)| *y == Ratio::from_integer(0)));
        // n=2, vals (2,-1): hull (0,0),(1,-2),(2,-3),(3,-2),(4,0).
        let p2 = newton_polygon(&HeckePolynomial {
            q: 5,
            alpha_vals: vec![Ratio::from_integer(2), Ratio::from_integer(-1)],
        });
        let expect2: Vec<(Q, Q)> = [(0, 0), (1, -2), (2, -3), (3, -2), (4, 0)]
            .iter()
            .map(|&(x, y)| (Ratio::from_integer(x), Ratio::from_integer(y)))
            .collect();
        assert_eq!(p2.vertices, expect2);
    }

    #[test]
    fn newton_polygon_matches_convex_hull_and_is_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=4);
            let vals: Vec<Q> = (0..n)
                .map(|_| Ratio::new(rng.gen_range(-6..=6i64), rng.gen_range(1..=2i64)))
                .collect();
            let poly = newton_polygon(&HeckePolynomial { q: 3, alpha_vals: vals });
            // Symmetry about x = n: y(n+t) - y(n) = y(n-t) - y(n) + slope-pair
            // cancellation, i.e. y(2n - x) = y(x) + (y(2n) - y(0)) - ... with
            // endpoints both 0 the clean statement is y(2n-x) = y(x).
            let two_n = Ratio::from_integer(2 * n as i64);
            for (x, y) in &poly.vertices {
                let mirrored = poly.ordinate_at(two_n - x).unwrap();
                assert_eq!(mirrored, *y);
            }
            // Lower convex hull of the vertex set reproduces the vertex chain
            // (the slope construction is already convex).
            let hull = lower_convex_hull(&poly.vertices);
            for v in &hull {
                assert!(poly.vertices.contains(v));
            }
            for w in poly.vertices.windows(2) {
                // Every vertex lies on the hull's piecewise interpolation.
                let hp = Polygon { vertices: hull.clone() };
                assert_eq!(hp.ordinate_at(w[0].0).unwrap(), w[0].1);
            }
        }
    }

    #[test]
    fn panchishkin_midpoint() {
        // n=1 pure-of-weight-0 datum with p-sequence (-1, 1): midpoint (1,-1).
        let d = HodgeData { n: 1, pairs: vec![(-1, 1), (1, -1)], critint: false };
        let hodge = hodge_polygon(&[d]).unwrap();
        // Equal polygons: true.
        assert!(panchishkin_check(&hodge, &hodge, 1).unwrap());
        // Vertical translate: false.
        let shifted = Polygon {
            vertices: hodge
                .vertices
                .iter()
                .map(|(x, y)| (*x, *y + Ratio::from_integer(1)))
                .collect(),
        };
        assert!(!panchishkin_check(&shifted, &hodge, 1).unwrap());
        // Slope-(-1,1) Satake datum meets this Hodge polygon at the
        // midpoint (1,-1).
        let newton = newton_polygon(&HeckePolynomial {
            q: 5,
            alpha_vals: vec![Ratio::from_integer(-1)],
        });
        assert!(panchishkin_check(&newton, &hodge, 1).unwrap());
        // Span mismatch errors out.
        let short = Polygon { vertices: vec![(Ratio::from_integer(0), Ratio::from_integer(0))] };
        assert!(panchishkin_check(&short, &hodge, 1).is_err());
    }

    #[test]
    fn hodge_endpoint_total() {
        // Ordinate at x = 2n is the full p-sum; purity makes it n(n-1) per place.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let n = rng.gen_range(1..=4u32);
            let a = rng.gen_range(0..=n);
            let b = n - a;
            let mut kappa: Vec<i64> = (0..a).map(|_| rng.gen_range(-5..=5)).collect();
            let mut kappa_c: Vec<i64> = (0..b).map(|_| rng.gen_range(-5..=5)).collect();
            kappa.sort_unstable_by(|x, y| y.cmp(x));
            kappa_c.sort_unstable_by(|x, y| y.cmp(x));
            let h = hodge_types(&kappa, &kappa_c, a, b).unwrap();
            let total: i64 = h.pairs.iter().map(|(p, _)| p).sum();
            assert_eq!(total, (n as i64) * (n as i64 - 1));
        }
    }

    #[test]
    fn tsv_and_svg_emission() {
        let poly = newton_polygon(&HeckePolynomial {
            q: 5,
            alpha_vals: vec![Ratio::new(1, 2)],
        });
        let tsv = polygon_to_tsv(&poly);
        assert_eq!(tsv, "x\ty\n0\t0\n1\t-1/2\n2\t0\n");
        let svg = polygons_to_svg(&[("newton", &poly)]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("polyline"));
        assert!(svg.contains("newton"));
        // Deterministic emission.
        assert_eq!(svg, polygons_to_svg(&[("newton", &poly)]));
    }

    #[test]
    fn polygon_serde_round_trip() {
        let poly = newton_polygon(&HeckePolynomial {
            q: 7,
            alpha_vals: vec![Ratio::new(3, 2), Ratio::from_integer(-1)],
        });
        let json = serde_json::to_string(&poly).unwrap();
        let back: Polygon = serde_json::from_str(&json).unwrap();
        assert_eq!(back, poly);
    }
}
