//! Persistence diagrams: points above the diagonal plus implicit diagonal copies,
//! and the shared text file format.

use std::cmp::Ordering;
use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::norm::{pow_p, PNorm};

/// A birth/death pair strictly above the diagonal.
///
/// `death` may be `+inf` (an essential class). Such points are representable
/// but every metric and statistic operation rejects them with
/// [`Error::EssentialPoint`]: distances across essential-point counts are
/// infinite, so we fail loudly instead of guessing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePoint {
    birth: f64,
    death: f64,
}

impl PlanePoint {
    /// Requires finite `birth`, non-NaN `death`, and `birth < death`.
    pub fn new(birth: f64, death: f64) -> Result<Self> {
        if !birth.is_finite() || death.is_nan() {
            return Err(Error::Invariant {
                line: None,
                msg: format!("birth must be finite and death a number, got ({birth}, {death})"),
            });
        }
        if birth >= death {
            return Err(Error::Invariant {
                line: None,
                msg: format!("birth {birth} is not strictly less than death {death}"),
            });
        }
        Ok(PlanePoint { birth, death })
    }

    pub fn birth(&self) -> f64 {
        self.birth
    }

    pub fn death(&self) -> f64 {
        self.death
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }

    pub fn is_essential(&self) -> bool {
        self.death.is_infinite()
    }

    /// Total order by `(birth, death)`; safe because coordinates are never NaN.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        (self.birth, self.death)
            .partial_cmp(&(other.birth, other.death))
            .expect("diagram points are never NaN")
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.death.is_infinite() {
            write!(f, "({}, inf)", self.birth)
        } else {
            write!(f, "({}, {})", self.birth, self.death)
        }
    }
}

/// One element of a diagram: an off-diagonal point or (a copy of) the diagonal.
///
/// Diagonal copies are interchangeable, so the variant carries no data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Element {
    Point(PlanePoint),
    Diagonal,
}

impl Element {
    pub fn as_point(&self) -> Option<&PlanePoint> {
        match self {
            Element::Point(p) => Some(p),
            Element::Diagonal => None,
        }
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self, Element::Diagonal)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Point(p) => write!(f, "{p}"),
            Element::Diagonal => write!(f, "diagonal"),
        }
    }
}

/// A finite multiset of off-diagonal points (duplicates are distinct members),
/// plus countably many implicit diagonal copies.
///
/// Points are kept sorted by `(birth, death)`, so equal multisets compare
/// equal. Diagrams are immutable after construction and freely shareable
/// across threads.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagram {
    points: Vec<PlanePoint>,
}

impl Diagram {
    pub fn new(mut points: Vec<PlanePoint>) -> Self {
        points.sort_by(PlanePoint::canonical_cmp);
        Diagram { points }
    }

    /// The diagonal-only diagram.
    pub fn empty() -> Self {
        Diagram { points: Vec::new() }
    }

    pub fn points(&self) -> &[PlanePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn has_essential(&self) -> bool {
        self.points.iter().any(PlanePoint::is_essential)
    }

    /// Reads the text format: one `<birth> <death>` pair per line, `inf`
    /// allowed for death, `#` starts a comment, blank lines ignored.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let buf = BufReader::new(reader);
        let mut points = Vec::new();
        for (idx, line) in buf.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if tokens.len() != 2 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected `<birth> <death>`, got {} token(s)", tokens.len()),
                });
            }
            let birth = parse_coord(tokens[0], line_no)?;
            let death = parse_coord(tokens[1], line_no)?;
            let point = PlanePoint::new(birth, death).map_err(|e| match e {
                Error::Invariant { msg, .. } => Error::Invariant {
                    line: Some(line_no),
                    msg,
                },
                other => other,
            })?;
            points.push(point);
        }
        Ok(Diagram::new(points))
    }

    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for p in &self.points {
            if p.death.is_infinite() {
                writeln!(w, "{} inf", p.birth)?;
            } else {
                writeln!(w, "{} {}", p.birth, p.death)?;
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = Vec::new();
        self.write(&mut out).expect("writing to a Vec cannot fail");
        String::from_utf8(out).expect("diagram text is ASCII")
    }
}

impl FromStr for Diagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Diagram::from_reader(s.as_bytes())
    }
}

fn parse_coord(token: &str, line: usize) -> Result<f64> {
    let v: f64 = token.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("cannot parse coordinate {token:?}"),
    })?;
    if v.is_nan() {
        return Err(Error::Parse {
            line,
            msg: "coordinate is NaN".into(),
        });
    }
    Ok(v)
}

/// The canonical nearest diagonal point of `x`: the midpoint
/// `((b+d)/2, (b+d)/2)`.
///
/// For `p = 1` any point of the segment between `(b, b)` and `(d, d)` is
/// equidistant; the midpoint is the one choice optimal for every `p`
/// simultaneously, which keeps geodesics independent of `p`.
pub fn diagonal_projection(x: &PlanePoint) -> Result<(f64, f64)> {
    if x.is_essential() {
        return Err(Error::EssentialPoint);
    }
    let m = 0.5 * (x.birth + x.death);
    Ok((m, m))
}

/// l_p distance from `x` to the nearest diagonal point:
/// `(death - birth)/2 * 2^(1/p)` for finite `p`, `(death - birth)/2` for
/// `p = inf`.
pub fn dist_to_diagonal(x: &PlanePoint, p: PNorm) -> Result<f64> {
    if x.is_essential() {
        return Err(Error::EssentialPoint);
    }
    let h = 0.5 * x.persistence();
    Ok(match p {
        PNorm::Infinity => h,
        PNorm::Finite(p) if p == 1.0 => 2.0 * h,
        PNorm::Finite(p) if p == 2.0 => h * std::f64::consts::SQRT_2,
        PNorm::Finite(p) => h * 2f64.powf(1.0 / p),
    })
}

/// `dist_to_diagonal(x, p)^p` computed without the intermediate root
/// (`2 * h^p`, or `h` for `p = inf`); used for cost-matrix entries.
pub(crate) fn diag_pow_cost(x: &PlanePoint, p: PNorm) -> f64 {
    debug_assert!(!x.is_essential());
    let h = 0.5 * x.persistence();
    match p {
        PNorm::Infinity => h,
        PNorm::Finite(p) => 2.0 * pow_p(h, p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::lp_norm;

    fn pt(b: f64, d: f64) -> PlanePoint {
        PlanePoint::new(b, d).unwrap()
    }

    #[test]
    fn projection_is_the_midpoint() {
        assert_eq!(diagonal_projection(&pt(1.0, 4.0)).unwrap(), (2.5, 2.5));
        assert_eq!(diagonal_projection(&pt(0.0, 2.0)).unwrap(), (1.0, 1.0));
        assert_eq!(diagonal_projection(&pt(3.0, 5.0)).unwrap(), (4.0, 4.0));
    }

    #[test]
    fn diagonal_distance_examples() {
        let x = pt(0.0, 2.0);
        assert_eq!(dist_to_diagonal(&x, PNorm::ONE).unwrap(), 2.0);
        assert!((dist_to_diagonal(&x, PNorm::TWO).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(dist_to_diagonal(&x, PNorm::Infinity).unwrap(), 1.0);
    }

    #[test]
    fn diagonal_distance_matches_projection_norm() {
        let ps = [
            PNorm::ONE,
            PNorm::Finite(1.5),
            PNorm::TWO,
            PNorm::Finite(4.0),
            PNorm::Infinity,
        ];
        for &(b, d) in &[(1.0, 4.0), (-2.0, 1.0), (0.25, 0.5), (3.0, 9.5)] {
            let x = pt(b, d);
            let (m, _) = diagonal_projection(&x).unwrap();
            for &p in &ps {
                let direct = dist_to_diagonal(&x, p).unwrap();
                let via_proj = lp_norm(b - m, d - m, p);
                assert!(
                    (direct - via_proj).abs() <= 1e-12,
                    "p={p}: {direct} vs {via_proj}"
                );
            }
        }
    }

    #[test]
    fn essential_points_are_rejected_by_metric_helpers() {
        let e = pt(1.0, f64::INFINITY);
        assert!(e.is_essential());
        assert!(matches!(
            dist_to_diagonal(&e, PNorm::TWO),
            Err(Error::EssentialPoint)
        ));
        assert!(matches!(
            diagonal_projection(&e),
            Err(Error::EssentialPoint)
        ));
    }

    #[test]
    fn point_invariants() {
        assert!(PlanePoint::new(2.0, 1.0).is_err());
        assert!(PlanePoint::new(1.0, 1.0).is_err());
        assert!(PlanePoint::new(f64::INFINITY, f64::INFINITY).is_err());
        assert!(PlanePoint::new(f64::NEG_INFINITY, 1.0).is_err());
        assert!(PlanePoint::new(1.0, f64::INFINITY).is_ok());
    }

    #[test]
    fn parses_the_documented_format() {
        let d: Diagram = "1 4\n3 5\n".parse().unwrap();
        assert_eq!(d.points(), &[pt(1.0, 4.0), pt(3.0, 5.0)]);

        let empty: Diagram = "".parse().unwrap();
        assert!(empty.is_empty());

        let commented: Diagram = "# header\n1 4 # trailing\n\n  3   5\n".parse().unwrap();
        assert_eq!(commented, d);

        let essential: Diagram = "0.5 inf\n".parse().unwrap();
        assert!(essential.has_essential());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match "1 4\n2 1\n".parse::<Diagram>() {
            Err(Error::Invariant { line: Some(2), .. }) => {}
            other => panic!("expected invariant error on line 2, got {other:?}"),
        }
        match "1 4\nbogus\n".parse::<Diagram>() {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("expected parse error on line 2, got {other:?}"),
        }
        match "1 2 3\n".parse::<Diagram>() {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("expected parse error on line 1, got {other:?}"),
        }
    }

    #[test]
    fn write_then_read_is_identity() {
        let d = Diagram::new(vec![pt(0.1, 0.30000000000000004), pt(-3.5, 2.25), pt(1.0, f64::INFINITY)]);
        let text = d.to_text();
        let back: Diagram = text.parse().unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn duplicates_are_preserved() {
        let d: Diagram = "1 2\n1 2\n".parse().unwrap();
        assert_eq!(d.len(), 2);
    }
}
