//! Plain-text file formats.
//!
//! All formats are line based. Blank lines and lines starting with `#` are
//! ignored by the parsers; writers never emit them.
//!
//! ```text
//! scenario MA MB KA KB          table: one `p A B I J = N/D` per nonzero entry
//! point SPACE MA MB             reduced point: coordinates on the next line
//! vertices SPACE MA MB R COUNT  one reduced point per line
//! ineq SPACE MA MB COUNT        `c … c <= b` or `c … c = b` per line
//! ```
//!
//! `SPACE` is `fixed` (Alice sends), `fixed-ba` (Bob sends) or `bidir`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::bounds::LowerBoundReport;
use crate::coords::{ReducedPoint, Space};
use crate::error::{Error, Result};
use crate::inequality::{LinearEquation, LinearInequality};
use crate::polyhedra::{HRep, MembershipResult};
use crate::rational::{self, Rational};
use crate::strategies::{Strategy, StrategyEnsemble};
use crate::symmetry::InequalityClass;
use crate::table::{CorrelationTable, Scenario};

/// Non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("{what} must be a nonnegative integer, got `{tok}`")))
}

fn parse_rational(tok: &str, line: usize) -> Result<Rational> {
    rational::parse(tok).ok_or_else(|| Error::parse(line, format!("bad rational `{tok}`")))
}

fn parse_bigint(tok: &str, line: usize) -> Result<BigInt> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("bad integer `{tok}`")))
}

fn expect_keyword<'a>(
    toks: &mut impl Iterator<Item = &'a str>,
    keyword: &str,
    line: usize,
) -> Result<()> {
    match toks.next() {
        Some(k) if k == keyword => Ok(()),
        other => Err(Error::parse(
            line,
            format!("expected `{keyword}`, found `{}`", other.unwrap_or("")),
        )),
    }
}

fn no_more<'a>(mut toks: impl Iterator<Item = &'a str>, line: usize) -> Result<()> {
    match toks.next() {
        None => Ok(()),
        Some(t) => Err(Error::parse(line, format!("unexpected token `{t}`"))),
    }
}

fn parse_space(tok: Option<&str>, line: usize) -> Result<Space> {
    let tok = tok.ok_or_else(|| Error::parse(line, "missing space"))?;
    Space::from_token(tok).ok_or_else(|| Error::parse(line, format!("unknown space `{tok}`")))
}

/// `SPACE MA MB` as used by the point, vertex and inequality headers.
fn parse_space_header<'a>(toks: &mut impl Iterator<Item = &'a str>, line: usize) -> Result<(Space, Scenario)> {
    let space = parse_space(toks.next(), line)?;
    let ma = parse_usize(toks.next(), line, "MA")?;
    let mb = parse_usize(toks.next(), line, "MB")?;
    let sc = Scenario::binary(ma, mb).map_err(|e| Error::parse(line, e.to_string()))?;
    Ok((space, sc))
}

/// A numbered content line.
type Line<'a> = (usize, &'a str);

fn header<'a>(text: &'a str, what: &str) -> Result<(Line<'a>, impl Iterator<Item = Line<'a>>)> {
    let mut lines = content_lines(text);
    let first = lines
        .next()
        .ok_or_else(|| Error::parse(1, format!("empty {what} file")))?;
    Ok((first, lines))
}

fn coords_text(coords: &[Rational]) -> String {
    coords.iter().map(rational::to_text).collect::<Vec<_>>().join(" ")
}

fn parse_coords(line_text: &str, line: usize, dim: usize) -> Result<Vec<Rational>> {
    let coords: Vec<Rational> = line_text
        .split_whitespace()
        .map(|t| parse_rational(t, line))
        .collect::<Result<_>>()?;
    if coords.len() != dim {
        return Err(Error::parse(
            line,
            format!("expected {dim} coordinates, found {}", coords.len()),
        ));
    }
    Ok(coords)
}

pub fn write_table(t: &CorrelationTable) -> String {
    let sc = t.scenario();
    let mut out = format!("scenario {} {} {} {}\n", sc.ma, sc.mb, sc.ka, sc.kb);
    for i in 0..sc.ma {
        for j in 0..sc.mb {
            for a in 0..sc.ka {
                for b in 0..sc.kb {
                    let v = t.get(a, b, i, j);
                    if !v.is_zero() {
                        let _ = writeln!(out, "p {a} {b} {i} {j} = {}", rational::to_text(v));
                    }
                }
            }
        }
    }
    out
}

pub fn parse_table(text: &str) -> Result<CorrelationTable> {
    let ((line, head), rest) = header(text, "table")?;
    let mut toks = head.split_whitespace();
    expect_keyword(&mut toks, "scenario", line)?;
    let ma = parse_usize(toks.next(), line, "MA")?;
    let mb = parse_usize(toks.next(), line, "MB")?;
    let ka = parse_usize(toks.next(), line, "KA")?;
    let kb = parse_usize(toks.next(), line, "KB")?;
    no_more(toks, line)?;
    let sc = Scenario::new(ma, mb, ka, kb).map_err(|e| Error::parse(line, e.to_string()))?;
    let mut t = CorrelationTable::zeros(sc);
    let mut seen = vec![false; sc.len()];
    for (line, l) in rest {
        let mut toks = l.split_whitespace();
        expect_keyword(&mut toks, "p", line)?;
        let a = parse_usize(toks.next(), line, "A")?;
        let b = parse_usize(toks.next(), line, "B")?;
        let i = parse_usize(toks.next(), line, "I")?;
        let j = parse_usize(toks.next(), line, "J")?;
        expect_keyword(&mut toks, "=", line)?;
        let v = parse_rational(toks.next().unwrap_or(""), line)?;
        no_more(toks, line)?;
        if a >= ka || b >= kb || i >= ma || j >= mb {
            return Err(Error::parse(line, format!("entry ({a},{b},{i},{j}) outside {sc}")));
        }
        let k = sc.index(a, b, i, j);
        if std::mem::replace(&mut seen[k], true) {
            return Err(Error::parse(line, format!("entry ({a},{b},{i},{j}) given twice")));
        }
        t.set(a, b, i, j, v);
    }
    Ok(t)
}

pub fn write_point(p: &ReducedPoint) -> String {
    format!(
        "point {} {} {}\n{}\n",
        p.space.token(),
        p.scenario.ma,
        p.scenario.mb,
        coords_text(&p.coords)
    )
}

pub fn parse_point(text: &str) -> Result<ReducedPoint> {
    let ((line, head), rest) = header(text, "point")?;
    let mut toks = head.split_whitespace();
    expect_keyword(&mut toks, "point", line)?;
    let (space, sc) = parse_space_header(&mut toks, line)?;
    no_more(toks, line)?;
    let mut joined = String::new();
    let mut last = line;
    for (l, text) in rest {
        joined.push_str(text);
        joined.push(' ');
        last = l;
    }
    let coords = parse_coords(&joined, last, space.dimension(&sc))?;
    ReducedPoint::new(space, sc, coords)
}

/// A vertex list together with the model parameters it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexFile {
    pub space: Space,
    pub scenario: Scenario,
    pub r_bits: u32,
    pub points: Vec<Vec<Rational>>,
}

pub fn write_vertices(v: &VertexFile) -> String {
    let mut out = format!(
        "vertices {} {} {} {} {}\n",
        v.space.token(),
        v.scenario.ma,
        v.scenario.mb,
        v.r_bits,
        v.points.len()
    );
    for p in &v.points {
        out.push_str(&coords_text(p));
        out.push('\n');
    }
    out
}

pub fn parse_vertices(text: &str) -> Result<VertexFile> {
    let ((line, head), rest) = header(text, "vertex")?;
    let mut toks = head.split_whitespace();
    expect_keyword(&mut toks, "vertices", line)?;
    let (space, scenario) = parse_space_header(&mut toks, line)?;
    let r_bits = parse_usize(toks.next(), line, "RBITS")?;
    let count = parse_usize(toks.next(), line, "COUNT")?;
    no_more(toks, line)?;
    let dim = space.dimension(&scenario);
    let points: Vec<Vec<Rational>> = rest
        .map(|(l, text)| parse_coords(text, l, dim))
        .collect::<Result<_>>()?;
    if points.len() != count {
        return Err(Error::parse(
            line,
            format!("header announces {count} vertices, found {}", points.len()),
        ));
    }
    let r_bits = u32::try_from(r_bits).map_err(|_| Error::parse(line, "RBITS too large"))?;
    Ok(VertexFile {
        space,
        scenario,
        r_bits,
        points,
    })
}

/// An H-representation in a named coordinate space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityFile {
    pub space: Space,
    pub scenario: Scenario,
    pub inequalities: Vec<LinearInequality>,
    pub equations: Vec<LinearEquation>,
}

impl InequalityFile {
    pub fn from_hrep(space: Space, scenario: Scenario, h: HRep) -> Self {
        InequalityFile {
            space,
            scenario,
            inequalities: h.inequalities,
            equations: h.equations,
        }
    }
}

/// Equations are listed first.
pub fn write_inequalities(f: &InequalityFile) -> String {
    let mut out = format!(
        "ineq {} {} {} {}\n",
        f.space.token(),
        f.scenario.ma,
        f.scenario.mb,
        f.equations.len() + f.inequalities.len()
    );
    for e in &f.equations {
        let _ = writeln!(out, "{e}");
    }
    for q in &f.inequalities {
        let _ = writeln!(out, "{q}");
    }
    out
}

pub fn parse_inequalities(text: &str) -> Result<InequalityFile> {
    let ((line, head), rest) = header(text, "inequality")?;
    let mut toks = head.split_whitespace();
    expect_keyword(&mut toks, "ineq", line)?;
    let (space, scenario) = parse_space_header(&mut toks, line)?;
    let count = parse_usize(toks.next(), line, "COUNT")?;
    no_more(toks, line)?;
    let dim = space.dimension(&scenario);
    let mut inequalities = Vec::new();
    let mut equations = Vec::new();
    for (l, text) in rest {
        let toks: Vec<&str> = text.split_whitespace().collect();
        if toks.len() != dim + 2 {
            return Err(Error::parse(
                l,
                format!("expected {dim} coefficients, a relation and a bound"),
            ));
        }
        let coeffs: Vec<BigInt> = toks[..dim]
            .iter()
            .map(|t| parse_bigint(t, l))
            .collect::<Result<_>>()?;
        let rhs = parse_bigint(toks[dim + 1], l)?;
        let lift = |e: Error| Error::parse(l, e.to_string());
        match toks[dim] {
            "<=" => inequalities.push(LinearInequality::new(coeffs, rhs).map_err(lift)?),
            "=" => equations.push(LinearEquation::new(coeffs, rhs).map_err(lift)?),
            other => return Err(Error::parse(l, format!("unknown relation `{other}`"))),
        }
    }
    if inequalities.len() + equations.len() != count {
        return Err(Error::parse(
            line,
            format!(
                "header announces {count} rows, found {}",
                inequalities.len() + equations.len()
            ),
        ));
    }
    Ok(InequalityFile {
        space,
        scenario,
        inequalities,
        equations,
    })
}

fn join(xs: &[usize], sep: &str) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(sep)
}

fn join_rows(rows: &[Vec<usize>]) -> String {
    rows.iter().map(|r| join(r, ".")).collect::<Vec<_>>().join(",")
}

/// One line per member: the weight, the model and its maps.
pub fn write_ensemble(e: &StrategyEnsemble) -> String {
    let sc = e.scenario();
    let mut out = format!(
        "ensemble {} {} {} {} {} bits={}\n",
        sc.ma,
        sc.mb,
        sc.ka,
        sc.kb,
        e.len(),
        e.bit_cost()
    );
    for (w, s) in e.entries() {
        let w = rational::to_text(w);
        let _ = match s {
            Strategy::Lsr(s) => writeln!(out, "{w} lsr alice={} bob={}", join(&s.alice, ","), join(&s.bob, ",")),
            Strategy::Fixed(s) => writeln!(
                out,
                "{w} {} alphabet={} kappa={} sender={} receiver={}",
                Space::Fixed(s.direction).token(),
                s.alphabet,
                join(&s.kappa, ","),
                join(&s.sender_output, ","),
                join_rows(&s.receiver_output)
            ),
            Strategy::Bidir(s) => writeln!(
                out,
                "{w} bidir s={} r={} kappa={} sigma={} alice={} bob={}",
                s.s_bits,
                s.r_bits,
                join(&s.kappa, ","),
                join(&s.sigma, ","),
                join_rows(&s.alice_output),
                join_rows(&s.bob_output)
            ),
        };
    }
    out
}

/// Class listing: a summary header, then per class its representative,
/// member count and triviality, and optionally the chart layout.
pub fn write_class_report(
    space: Space,
    sc: &Scenario,
    classes: &[InequalityClass],
    equations: &[LinearEquation],
    charts: bool,
) -> String {
    let trivial = classes.iter().filter(|c| c.trivial).count();
    let mut out = format!(
        "classes {} {} {} nontrivial={} trivial={} total={}\n",
        space.token(),
        sc.ma,
        sc.mb,
        classes.len() - trivial,
        trivial,
        classes.len()
    );
    for e in equations {
        let _ = writeln!(out, "{e}");
    }
    for (k, c) in classes.iter().enumerate() {
        let _ = writeln!(
            out,
            "class {} members={} orbit={} trivial={}",
            k + 1,
            c.members.len(),
            c.orbit_size,
            if c.trivial { "yes" } else { "no" }
        );
        let _ = writeln!(out, "{}", c.representative);
        if charts {
            out.push_str(&c.representative.chart(space, sc));
        }
    }
    out
}

pub fn write_membership(result: &MembershipResult) -> String {
    match result {
        MembershipResult::Inside { weights } => {
            let mut out = format!("inside {}\n", weights.len());
            for (k, w) in weights {
                let _ = writeln!(out, "{k} {}", rational::to_text(w));
            }
            out
        }
        MembershipResult::Outside { separator } => format!("outside\n{separator}\n"),
    }
}

pub fn write_lower_bound_report(r: &LowerBoundReport) -> String {
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    let mut out = format!(
        "lowerbound {} {} r={}{}\n",
        r.scenario.ma,
        r.scenario.mb,
        r.r_bits,
        if r.swapped { " swapped" } else { "" }
    );
    match r.exhaustive_refuted {
        Some(v) => {
            let _ = writeln!(
                out,
                "exhaustiveRefuted={} strategies={}",
                yes_no(v),
                r.strategies_checked
            );
        }
        None => out.push_str("exhaustiveRefuted=skipped\n"),
    }
    let _ = writeln!(out, "lpOutside={}", yes_no(r.lp_outside));
    if let Some(q) = &r.separator {
        let _ = writeln!(out, "separator {}", q);
    }
    for ex in &r.certificate_examples {
        let s = &ex.strategy;
        let _ = writeln!(
            out,
            "example s={} kappa={} sigma={} alice={} bob={} triple={},{},{} violates {}",
            s.s_bits,
            join(&s.kappa, ","),
            join(&s.sigma, ","),
            join_rows(&s.alice_output),
            join_rows(&s.bob_output),
            ex.triple.t0,
            ex.triple.t1,
            ex.triple.t2,
            ex.violated
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::project;
    use crate::rational::{frac, half};

    #[test]
    fn table_round_trip() {
        let sc = Scenario::new(2, 3, 2, 3).unwrap();
        let t = CorrelationTable::from_fn(sc, |a, b, i, j| if (a + b + i + j) % 2 == 0 { frac(1, 3) } else { Rational::zero() });
        let text = write_table(&t);
        assert!(text.starts_with("scenario 2 3 2 3\np 0 0 0 0 = 1/3\n"));
        assert_eq!(parse_table(&text).unwrap(), t);
    }

    #[test]
    fn table_errors_carry_line_numbers() {
        let bad = "scenario 1 1 2 2\np 0 0 0 0 = 1\np 2 0 0 0 = 0\n";
        assert!(matches!(parse_table(bad), Err(Error::Parse { line: 3, .. })));
        let dup = "scenario 1 1 2 2\np 0 0 0 0 = 1\n# c\np 0 0 0 0 = 1\n";
        assert!(matches!(parse_table(dup), Err(Error::Parse { line: 4, .. })));
        assert!(parse_table("scenario 1 1 2\n").is_err());
        assert!(parse_table("p 0 0 0 0 = 1\n").is_err());
        assert!(parse_table("scenario 1 1 2 2\np 0 0 0 0 = 1/0\n").is_err());
    }

    #[test]
    fn point_round_trip() {
        let sc = Scenario::binary(2, 2).unwrap();
        let p = project(Space::Bidir, &CorrelationTable::uniform(sc)).unwrap();
        let text = write_point(&p);
        assert!(text.starts_with("point bidir 2 2\n1/4 "));
        assert_eq!(parse_point(&text).unwrap(), p);
        assert!(parse_point("point bidir 2 2\n1 2 3\n").is_err());
    }

    #[test]
    fn vertices_round_trip() {
        let v = VertexFile {
            space: Space::FIXED,
            scenario: Scenario::binary(1, 1).unwrap(),
            r_bits: 0,
            points: vec![vec![half(), Rational::zero(), Rational::from_integer(1.into())]],
        };
        let text = write_vertices(&v);
        assert_eq!(text, "vertices fixed 1 1 0 1\n1/2 0 1\n");
        assert_eq!(parse_vertices(&text).unwrap(), v);
        assert!(parse_vertices("vertices fixed 1 1 0 2\n1/2 0 1\n").is_err());
    }

    #[test]
    fn inequalities_round_trip() {
        let f = InequalityFile {
            space: Space::Bidir,
            scenario: Scenario::binary(1, 1).unwrap(),
            inequalities: vec![LinearInequality::from_i64(&[-1, 0, 2], 3).unwrap()],
            equations: vec![LinearEquation::new(vec![0.into(), 1.into(), 1.into()], 1.into()).unwrap()],
        };
        let text = write_inequalities(&f);
        assert_eq!(text, "ineq bidir 1 1 2\n0 1 1 = 1\n-1 0 2 <= 3\n");
        assert_eq!(parse_inequalities(&text).unwrap(), f);
        assert!(parse_inequalities("ineq bidir 1 1 1\n0 0 0 <= 1\n").is_err());
        assert!(parse_inequalities("ineq bidir 1 1 1\n1 0 0 < 1\n").is_err());
    }
}
