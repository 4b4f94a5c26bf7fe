use crate::window::WindowBox;
use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Zero {
    pub z: Complex64,
    /// `|f(z)|` at the reported point.
    pub residual: f64,
    pub multiplicity: u32,
}

/// A box still holding `count` zeros when the depth limit or the split
/// retries ran out.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnresolvedBox {
    pub window: WindowBox,
    pub count: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroReport {
    /// Free-form identity of the function, one line.
    pub label: String,
    /// The window actually searched (after any inflation).
    pub window: WindowBox,
    pub total_winding: i64,
    pub boxes_resolved: usize,
    /// Sorted by `(re, im)`.
    pub zeros: Vec<Zero>,
    pub unresolved: Vec<UnresolvedBox>,
}

impl ZeroReport {
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into().replace('\n', " ");
        self
    }

    pub fn multiplicity_total(&self) -> i64 {
        self.zeros.iter().map(|z| z.multiplicity as i64).sum()
    }

    /// Zero locations, each repeated by multiplicity.
    pub fn points(&self) -> Vec<Complex64> {
        self.zeros.iter().flat_map(|z| std::iter::repeat_n(z.z, z.multiplicity as usize)).collect()
    }

    pub fn count_where(&self, pred: impl Fn(Complex64) -> bool) -> u32 {
        self.zeros.iter().filter(|z| pred(z.z)).map(|z| z.multiplicity).sum()
    }
}

impl fmt::Display for ZeroReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = &self.window;
        writeln!(f, "zeros-report v{REPORT_VERSION}")?;
        writeln!(f, "label {}", self.label)?;
        writeln!(f, "window {} {} {} {}", w.lo().re, w.lo().im, w.hi().re, w.hi().im)?;
        writeln!(f, "winding {}", self.total_winding)?;
        writeln!(f, "boxes {}", self.boxes_resolved)?;
        writeln!(f, "zeros {}", self.zeros.len())?;
        for z in &self.zeros {
            writeln!(f, "{} {} {:e} {}", z.z.re, z.z.im, z.residual, z.multiplicity)?;
        }
        writeln!(f, "unresolved {}", self.unresolved.len())?;
        for u in &self.unresolved {
            let b = &u.window;
            writeln!(f, "{} {} {} {} {}", b.lo().re, b.lo().im, b.hi().re, b.hi().im, u.count)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseReportError {
    #[error("unsupported report header `{0}`")]
    Version(String),
    #[error("line {line}: expected {what}")]
    Malformed { line: usize, what: &'static str },
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn next(&mut self, what: &'static str) -> Result<(usize, &'a str), ParseReportError> {
        self.inner.next().map(|(i, l)| (i + 1, l)).ok_or(ParseReportError::Malformed { line: 0, what })
    }

    fn keyed(&mut self, key: &'static str) -> Result<(usize, &'a str), ParseReportError> {
        let (n, l) = self.next(key)?;
        match l.strip_prefix(key) {
            Some(rest) if rest.is_empty() || rest.starts_with(' ') => Ok((n, rest.strip_prefix(' ').unwrap_or(rest))),
            _ => Err(ParseReportError::Malformed { line: n, what: key }),
        }
    }
}

fn fields<T: FromStr>(line: usize, text: &str, count: usize, what: &'static str) -> Result<Vec<T>, ParseReportError> {
    let v: Vec<T> = text
        .split_whitespace()
        .map(|t| t.parse::<T>())
        .collect::<Result<_, _>>()
        .map_err(|_| ParseReportError::Malformed { line, what })?;
    if v.len() != count {
        return Err(ParseReportError::Malformed { line, what });
    }
    Ok(v)
}

fn parse_box(line: usize, text: &str, what: &'static str) -> Result<(WindowBox, Option<i64>), ParseReportError> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    let nums = fields::<f64>(line, &parts[..4.min(parts.len())].join(" "), 4, what)?;
    let b = WindowBox::from_bounds(nums[0], nums[1], nums[2], nums[3]).map_err(|_| ParseReportError::Malformed { line, what })?;
    let count = match parts.len() {
        4 => None,
        5 => Some(parts[4].parse::<i64>().map_err(|_| ParseReportError::Malformed { line, what })?),
        _ => return Err(ParseReportError::Malformed { line, what }),
    };
    Ok((b, count))
}

impl FromStr for ZeroReport {
    type Err = ParseReportError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = Lines { inner: s.lines().enumerate() };
        let (_, header) = lines.next("header")?;
        if header != format!("zeros-report v{REPORT_VERSION}") {
            return Err(ParseReportError::Version(header.to_string()));
        }
        let (_, label) = lines.keyed("label")?;
        let (n, w) = lines.keyed("window")?;
        let (window, _) = parse_box(n, w, "window bounds")?;
        let (n, t) = lines.keyed("winding")?;
        let total_winding = fields::<i64>(n, t, 1, "winding total")?[0];
        let (n, t) = lines.keyed("boxes")?;
        let boxes_resolved = fields::<usize>(n, t, 1, "box count")?[0];
        let (n, t) = lines.keyed("zeros")?;
        let count = fields::<usize>(n, t, 1, "zero count")?[0];
        let mut zeros = Vec::with_capacity(count);
        for _ in 0..count {
            let (n, l) = lines.next("zero record")?;
            let v = fields::<String>(n, l, 4, "zero record")?;
            let num = |i: usize| v[i].parse::<f64>().map_err(|_| ParseReportError::Malformed { line: n, what: "zero record" });
            let multiplicity = v[3].parse::<u32>().map_err(|_| ParseReportError::Malformed { line: n, what: "multiplicity" })?;
            zeros.push(Zero { z: Complex64::new(num(0)?, num(1)?), residual: num(2)?, multiplicity });
        }
        let (n, t) = lines.keyed("unresolved")?;
        let count = fields::<usize>(n, t, 1, "unresolved count")?[0];
        let mut unresolved = Vec::with_capacity(count);
        for _ in 0..count {
            let (n, l) = lines.next("unresolved box")?;
            let (window, c) = parse_box(n, l, "unresolved box")?;
            let count = c.ok_or(ParseReportError::Malformed { line: n, what: "unresolved count" })?;
            unresolved.push(UnresolvedBox { window, count });
        }
        Ok(ZeroReport { label: label.to_string(), window, total_winding, boxes_resolved, zeros, unresolved })
    }
}
