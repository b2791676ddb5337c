//! Line-oriented text formats.
//!
//! Every format is one directive per line; `#` starts a comment and blank
//! lines are ignored.
//!
//! Space:
//! ```text
//! space S2
//! points 2
//! rel 0 1        # leq(0, 1): 0 lies in the closure of {1}
//! ```
//! Relations are closed reflexively and transitively on load unless strict
//! loading is requested, in which case a non-transitive relation is an error.
//!
//! Subset analysis file: two spaces (X then Y) followed by
//! ```text
//! subset C
//! pair 0 1
//! ```
//!
//! 2-space model:
//! ```text
//! 2space name
//! base
//!   space W ... end
//! chart
//!   domain 0 1
//!   uspace ... end
//!   vspace ... end
//!   map <w> <u> <v>
//! end
//! ```
//!
//! 2-map: `2map`, `source <model file>`, `target <model file>`, then
//! `map <w> <w'>` lines. Model paths are relative to the 2-map file.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::space::{FiniteSpace, PointSet, MAX_POINTS};
use crate::two_space::{Chart, TwoSpace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedSpace {
    pub name: String,
    pub space: FiniteSpace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedSubset {
    pub name: String,
    pub pairs: Vec<(usize, usize)>,
}

/// Contents of a subset analysis file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisInput {
    pub x: NamedSpace,
    pub y: NamedSpace,
    pub subset: NamedSubset,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedModel {
    pub name: String,
    pub model: TwoSpace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoMapFile {
    pub source: String,
    pub target: String,
    pub map: Vec<(usize, usize)>,
}

struct Line<'a> {
    number: usize,
    words: Vec<&'a str>,
}

struct Lines<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let mut last_line = 0;
        let lines = text
            .lines()
            .enumerate()
            .filter_map(|(i, raw)| {
                last_line = i + 1;
                let content = raw.split('#').next().unwrap_or("");
                let words: Vec<&str> = content.split_whitespace().collect();
                (!words.is_empty()).then_some(Line { number: i + 1, words })
            })
            .collect();
        Lines {
            lines,
            pos: 0,
            last_line,
        }
    }

    fn peek(&self) -> Option<&Line<'a>> {
        self.lines.get(self.pos)
    }

    fn peek_keyword(&self) -> Option<&'a str> {
        self.peek().map(|l| l.words[0])
    }

    fn next(&mut self) -> Option<&Line<'a>> {
        let line = self.lines.get(self.pos);
        self.pos += 1;
        line
    }

    fn eof_line(&self) -> usize {
        self.last_line.max(1)
    }

    fn expect(&mut self, keyword: &str) -> Result<&Line<'a>> {
        let eof = self.eof_line();
        match self.next() {
            Some(line) if line.words[0] == keyword => Ok(line),
            Some(line) => Err(Error::parse(
                line.number,
                format!("expected `{keyword}`, found `{}`", line.words[0]),
            )),
            None => Err(Error::parse(
                eof,
                format!("expected `{keyword}`, found end of input"),
            )),
        }
    }
}

fn arity(line: &Line<'_>, n: usize) -> Result<()> {
    if line.words.len() == n + 1 {
        Ok(())
    } else {
        Err(Error::parse(
            line.number,
            format!(
                "`{}` takes {n} argument(s), got {}",
                line.words[0],
                line.words.len() - 1
            ),
        ))
    }
}

fn number(line: &Line<'_>, k: usize) -> Result<usize> {
    line.words[k]
        .parse()
        .map_err(|_| Error::parse(line.number, format!("`{}` is not a point index", line.words[k])))
}

fn point(line: &Line<'_>, k: usize, len: usize) -> Result<usize> {
    let p = number(line, k)?;
    if p >= len {
        return Err(Error::parse(
            line.number,
            format!("point {p} out of range for {len} points"),
        ));
    }
    Ok(p)
}

fn parse_space_block(lines: &mut Lines<'_>, strict: bool) -> Result<NamedSpace> {
    let header = lines.expect("space")?;
    let header_number = header.number;
    let name = header.words[1..].join(" ");
    if name.is_empty() {
        return Err(Error::parse(header_number, "`space` needs a name"));
    }
    let points = lines.expect("points")?;
    arity(points, 1)?;
    let n = number(points, 1)?;
    if n > MAX_POINTS {
        return Err(Error::parse(
            points.number,
            format!("{n} points exceeds the maximum of {MAX_POINTS}"),
        ));
    }
    let mut pairs = Vec::new();
    while lines.peek_keyword() == Some("rel") {
        let line = lines.next().unwrap();
        arity(line, 2)?;
        pairs.push((point(line, 1, n)?, point(line, 2, n)?));
    }
    let space = if strict {
        FiniteSpace::from_relation_strict(n, pairs)
    } else {
        FiniteSpace::from_relation(n, pairs)
    }
    .map_err(|e| Error::parse(header_number, format!("space `{name}`: {e}")))?;
    Ok(NamedSpace { name, space })
}

fn finish(lines: &mut Lines<'_>) -> Result<()> {
    match lines.next() {
        None => Ok(()),
        Some(line) => Err(Error::parse(
            line.number,
            format!("unexpected `{}`", line.words[0]),
        )),
    }
}

/// Parses a file holding one or more spaces.
pub fn parse_spaces(text: &str, strict: bool) -> Result<Vec<NamedSpace>> {
    let mut lines = Lines::new(text);
    let mut out = Vec::new();
    while lines.peek().is_some() {
        out.push(parse_space_block(&mut lines, strict)?);
    }
    if out.is_empty() {
        return Err(Error::parse(lines.eof_line(), "no `space` found"));
    }
    Ok(out)
}

pub fn parse_analysis(text: &str, strict: bool) -> Result<AnalysisInput> {
    let mut lines = Lines::new(text);
    let x = parse_space_block(&mut lines, strict)?;
    let y = parse_space_block(&mut lines, strict)?;
    let header = lines.expect("subset")?;
    let name = header.words[1..].join(" ");
    let mut pairs = Vec::new();
    while lines.peek_keyword() == Some("pair") {
        let line = lines.next().unwrap();
        arity(line, 2)?;
        pairs.push((point(line, 1, x.space.len())?, point(line, 2, y.space.len())?));
    }
    finish(&mut lines)?;
    pairs.sort_unstable();
    pairs.dedup();
    Ok(AnalysisInput {
        x,
        y,
        subset: NamedSubset { name, pairs },
    })
}

pub fn write_space(out: &mut String, named: &NamedSpace) {
    writeln!(out, "space {}", named.name).unwrap();
    writeln!(out, "points {}", named.space.len()).unwrap();
    for (i, j) in named.space.relation_pairs() {
        writeln!(out, "rel {i} {j}").unwrap();
    }
}

pub fn write_analysis(input: &AnalysisInput) -> String {
    let mut out = String::new();
    write_space(&mut out, &input.x);
    write_space(&mut out, &input.y);
    writeln!(out, "subset {}", input.subset.name).unwrap();
    for (a, b) in &input.subset.pairs {
        writeln!(out, "pair {a} {b}").unwrap();
    }
    out
}

fn parse_end_block(lines: &mut Lines<'_>, keyword: &str, strict: bool) -> Result<FiniteSpace> {
    lines.expect(keyword)?;
    let named = parse_space_block(lines, strict)?;
    lines.expect("end")?;
    Ok(named.space)
}

pub fn parse_model(text: &str, strict: bool) -> Result<NamedModel> {
    let mut lines = Lines::new(text);
    let header = lines.expect("2space")?;
    let name = header.words[1..].join(" ");
    let base = parse_end_block(&mut lines, "base", strict)?;
    let mut charts = Vec::new();
    while lines.peek_keyword() == Some("chart") {
        let chart_line = lines.next().unwrap().number;
        let domain = match lines.peek_keyword() {
            Some("domain") => {
                let line = lines.next().unwrap();
                let members = (1..line.words.len())
                    .map(|k| point(line, k, base.len()))
                    .collect::<Result<Vec<_>>>()?;
                Some((line.number, PointSet::from_points(base.len(), members)?))
            }
            _ => None,
        };
        let u_space = parse_end_block(&mut lines, "uspace", strict)?;
        let v_space = parse_end_block(&mut lines, "vspace", strict)?;
        let mut map = Vec::new();
        while lines.peek_keyword() == Some("map") {
            let line = lines.next().unwrap();
            arity(line, 3)?;
            let w = point(line, 1, base.len())?;
            let u = point(line, 2, u_space.len())?;
            let v = point(line, 3, v_space.len())?;
            if map.iter().any(|&(seen, _)| seen == w) {
                return Err(Error::parse(line.number, format!("point {w} mapped twice")));
            }
            map.push((w, (u, v)));
        }
        lines.expect("end")?;
        let chart = Chart::new(base.len(), u_space, v_space, map)
            .map_err(|e| Error::parse(chart_line, e.to_string()))?;
        if let Some((line, declared)) = domain {
            if declared != chart.domain {
                return Err(Error::parse(
                    line,
                    format!("domain {declared} differs from mapped points {}", chart.domain),
                ));
            }
        }
        charts.push(chart);
    }
    finish(&mut lines)?;
    Ok(NamedModel {
        name,
        model: TwoSpace::new(base, charts),
    })
}

fn write_block(out: &mut String, keyword: &str, name: &str, space: &FiniteSpace) {
    writeln!(out, "{keyword}").unwrap();
    write_space(
        out,
        &NamedSpace {
            name: name.to_string(),
            space: space.clone(),
        },
    );
    writeln!(out, "end").unwrap();
}

pub fn write_model(name: &str, model: &TwoSpace) -> String {
    let mut out = String::new();
    writeln!(out, "2space {name}").unwrap();
    write_block(&mut out, "base", "W", &model.base);
    for (k, chart) in model.charts.iter().enumerate() {
        writeln!(out, "chart").unwrap();
        let domain: Vec<String> = chart.domain.iter().map(|p| p.to_string()).collect();
        writeln!(out, "domain {}", domain.join(" ")).unwrap();
        write_block(&mut out, "uspace", &format!("U{k}"), &chart.u_space);
        write_block(&mut out, "vspace", &format!("V{k}"), &chart.v_space);
        for w in chart.domain.iter() {
            let (u, v) = chart.apply(w).expect("domain point has an image");
            writeln!(out, "map {w} {u} {v}").unwrap();
        }
        writeln!(out, "end").unwrap();
    }
    out
}

pub fn parse_two_map(text: &str) -> Result<TwoMapFile> {
    let mut lines = Lines::new(text);
    lines.expect("2map")?;
    let source = lines.expect("source")?;
    arity(source, 1)?;
    let source = source.words[1].to_string();
    let target = lines.expect("target")?;
    arity(target, 1)?;
    let target = target.words[1].to_string();
    let mut map = Vec::new();
    while lines.peek_keyword() == Some("map") {
        let line = lines.next().unwrap();
        arity(line, 2)?;
        map.push((number(line, 1)?, number(line, 2)?));
    }
    finish(&mut lines)?;
    Ok(TwoMapFile { source, target, map })
}

pub fn write_two_map(file: &TwoMapFile) -> String {
    let mut out = format!("2map\nsource {}\ntarget {}\n", file.source, file.target);
    for (w, image) in &file.map {
        writeln!(out, "map {w} {image}").unwrap();
    }
    out
}

impl TwoMapFile {
    /// The map as a dense vector over `source_len` points; every point must
    /// be mapped exactly once.
    pub fn dense(&self, source_len: usize) -> Result<Vec<usize>> {
        let mut dense = vec![None; source_len];
        for &(w, image) in &self.map {
            let slot = dense.get_mut(w).ok_or(Error::PointOutOfRange {
                index: w,
                len: source_len,
            })?;
            if slot.replace(image).is_some() {
                return Err(Error::Precondition(format!("point {w} mapped twice")));
            }
        }
        dense
            .into_iter()
            .enumerate()
            .map(|(w, image)| image.ok_or_else(|| Error::Precondition(format!("point {w} is not mapped"))))
            .collect()
    }
}
