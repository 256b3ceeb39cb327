//! Text forms for measures and test functions.
//!
//! Measures: `poly:gamma=<g>[,scale=<c>][,from=<s>]`,
//! `polylog:gamma=<g>,beta=<b>[,scale=<c>][,from=<s>]`, `atom:t=<t>,w=<w>`
//! and `zero`, joined by `+`. Functions: `fa:p=<p>,a=<a>`, `ga:a=<a>`,
//! `mono:n=<n>`, `coeffs:@<file>` (CSV rows `index,re,im`).
//! Whitespace is ignored everywhere; columns in errors are 1-based.

use std::path::Path;

use num_complex::Complex64;

use crate::analytic::CoefficientFunction;
use crate::error::{Error, Result};
use crate::measures::{Atom, Density, Measure, MeasurePart};

fn parse_err(column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        column,
        message: message.into(),
    }
}

/// Non-blank chars with their 1-based columns.
#[derive(Debug, Clone)]
struct Span {
    chars: Vec<(usize, char)>,
    /// Column just past the end, for "expected ..." errors.
    end: usize,
}

impl Span {
    fn of(text: &str) -> Self {
        let chars: Vec<(usize, char)> = text
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| (i + 1, c))
            .collect();
        Self {
            chars,
            end: text.chars().count() + 1,
        }
    }

    fn sub(&self, range: std::ops::Range<usize>) -> Self {
        let end = self.chars.get(range.end).map_or(self.end, |c| c.0);
        Self {
            chars: self.chars[range].to_vec(),
            end,
        }
    }

    fn col(&self) -> usize {
        self.chars.first().map_or(self.end, |c| c.0)
    }

    fn text(&self) -> String {
        self.chars.iter().map(|c| c.1).collect()
    }

    fn find(&self, ch: char) -> Option<usize> {
        self.chars.iter().position(|c| c.1 == ch)
    }

    /// Splits on `sep`; a `+` directly after a mantissa exponent marker stays
    /// inside its number.
    fn split(&self, sep: char) -> Vec<Span> {
        let mut out = Vec::new();
        let mut start = 0;
        for i in 0..self.chars.len() {
            if self.chars[i].1 != sep {
                continue;
            }
            if sep == '+' && i >= 2 {
                let e = self.chars[i - 1].1;
                let d = self.chars[i - 2].1;
                if (e == 'e' || e == 'E') && (d.is_ascii_digit() || d == '.') {
                    continue;
                }
            }
            out.push(self.sub(start..i));
            start = i + 1;
        }
        out.push(self.sub(start..self.chars.len()));
        out
    }
}

/// `kind:key=value,...` with the kind and its fields.
struct Term {
    kind: String,
    kind_col: usize,
    body: Span,
    fields: Vec<(String, usize, Span)>,
}

fn term(span: &Span) -> Result<Term> {
    if span.chars.is_empty() {
        return Err(parse_err(span.col(), "empty term"));
    }
    let kind_col = span.col();
    let Some(colon) = span.find(':') else {
        return Ok(Term {
            kind: span.text(),
            kind_col,
            body: span.sub(span.chars.len()..span.chars.len()),
            fields: Vec::new(),
        });
    };
    let kind = span.sub(0..colon).text();
    let body = span.sub(colon + 1..span.chars.len());
    Ok(Term {
        kind,
        kind_col,
        body,
        fields: Vec::new(),
    })
}

fn with_fields(mut t: Term) -> Result<Term> {
    if t.body.chars.is_empty() {
        return Err(parse_err(t.body.col(), format!("'{}' needs parameters", t.kind)));
    }
    for f in t.body.split(',') {
        let Some(eq) = f.find('=') else {
            return Err(parse_err(f.col(), format!("expected key=value, found '{}'", f.text())));
        };
        let key = f.sub(0..eq);
        let value = f.sub(eq + 1..f.chars.len());
        if key.chars.is_empty() {
            return Err(parse_err(f.col(), "missing key before '='"));
        }
        let name = key.text();
        if t.fields.iter().any(|(k, _, _)| *k == name) {
            return Err(parse_err(key.col(), format!("duplicate key '{name}'")));
        }
        t.fields.push((name, key.col(), value));
    }
    Ok(t)
}

impl Term {
    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        for (k, col, _) in &self.fields {
            if !allowed.contains(&k.as_str()) {
                return Err(parse_err(
                    *col,
                    format!("unknown key '{k}' for '{}' (expected {})", self.kind, allowed.join(", ")),
                ));
            }
        }
        Ok(())
    }

    fn get(&self, key: &str) -> Option<&Span> {
        self.fields.iter().find(|(k, _, _)| k == key).map(|(_, _, v)| v)
    }

    fn number(&self, key: &str) -> Result<Option<(f64, usize)>> {
        let Some(v) = self.get(key) else { return Ok(None) };
        let text = v.text();
        match text.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(Some((x, v.col()))),
            _ => Err(parse_err(v.col(), format!("'{key}' needs a finite number, found '{text}'"))),
        }
    }

    fn required(&self, key: &str) -> Result<(f64, usize)> {
        self.number(key)?.ok_or_else(|| {
            parse_err(self.body.end, format!("'{}' is missing required key '{key}'", self.kind))
        })
    }
}

/// Maps a library validation error onto the column of the offending value.
fn at(column: usize, r: Result<MeasurePart>) -> Result<MeasurePart> {
    r.map_err(|e| match e {
        Error::InfiniteMass(m) => parse_err(column, m),
        Error::Domain(m) => parse_err(column, m),
        other => other,
    })
}

fn density_part(t: &Term, has_beta: bool) -> Result<MeasurePart> {
    let (gamma, gcol) = t.required("gamma")?;
    let beta = if has_beta { t.required("beta")?.0 } else { 0.0 };
    let (scale, scol) = t.number("scale")?.unwrap_or((1.0, gcol));
    let (lower, lcol) = t.number("from")?.unwrap_or((0.0, gcol));
    at(gcol, Density::new(gamma, beta, 1.0).map(MeasurePart::Density))?;
    if !(scale >= 0.0) {
        return Err(parse_err(scol, format!("scale must be >= 0, found {scale}")));
    }
    if !(0.0..1.0).contains(&lower) {
        return Err(parse_err(lcol, format!("'from' must be in [0,1), found {lower}")));
    }
    Ok(MeasurePart::Density(Density {
        gamma,
        beta,
        scale,
        lower,
    }))
}

fn measure_part(span: &Span) -> Result<Option<MeasurePart>> {
    let t = term(span)?;
    match t.kind.as_str() {
        "zero" if t.body.chars.is_empty() && span.find(':').is_none() => Ok(None),
        "poly" => {
            let t = with_fields(t)?;
            t.check_keys(&["gamma", "scale", "from"])?;
            density_part(&t, false).map(Some)
        }
        "polylog" => {
            let t = with_fields(t)?;
            t.check_keys(&["gamma", "beta", "scale", "from"])?;
            density_part(&t, true).map(Some)
        }
        "atom" => {
            let t = with_fields(t)?;
            t.check_keys(&["t", "w"])?;
            let (loc, lcol) = t.required("t")?;
            let (w, wcol) = t.required("w")?;
            if !(0.0..1.0).contains(&loc) {
                return Err(parse_err(lcol, format!("atom location must be in [0,1), found {loc}")));
            }
            at(wcol, Atom::new(loc, w).map(MeasurePart::Atom)).map(Some)
        }
        other => Err(parse_err(
            t.kind_col,
            format!("unknown measure kind '{other}' (expected poly, polylog, atom or zero)"),
        )),
    }
}

/// Parses the measure DSL.
pub fn parse_measure(text: &str) -> Result<Measure> {
    let span = Span::of(text);
    if span.chars.is_empty() {
        return Err(parse_err(1, "empty measure"));
    }
    let mut parts = Vec::new();
    for piece in span.split('+') {
        if let Some(p) = measure_part(&piece)? {
            parts.push(p);
        }
    }
    let m = Measure::new(parts, "")?;
    let label = m.to_string();
    Ok(m.with_label(label))
}

/// Parses the function DSL; closed-form families are truncated at `n`.
pub fn parse_function(text: &str, n: usize) -> Result<CoefficientFunction> {
    let span = Span::of(text);
    if span.chars.is_empty() {
        return Err(parse_err(1, "empty function"));
    }
    let t = term(&span)?;
    let kind_col = t.kind_col;
    let lib = |col: usize, r: Result<CoefficientFunction>| {
        r.map_err(|e| match e {
            Error::Domain(m) => parse_err(col, m),
            other => other,
        })
    };
    match t.kind.as_str() {
        "fa" => {
            let t = with_fields(t)?;
            t.check_keys(&["p", "a"])?;
            let (p, pcol) = t.required("p")?;
            let (a, acol) = t.required("a")?;
            if !(p > 0.0) {
                return Err(parse_err(pcol, format!("p must be positive, found {p}")));
            }
            lib(acol, CoefficientFunction::family_fa(p, a, n))
        }
        "ga" => {
            let t = with_fields(t)?;
            t.check_keys(&["a"])?;
            let (a, acol) = t.required("a")?;
            lib(acol, CoefficientFunction::family_ga(a, n))
        }
        "mono" => {
            let t = with_fields(t)?;
            t.check_keys(&["n"])?;
            let v = t.get("n").ok_or_else(|| parse_err(t.body.end, "'mono' is missing required key 'n'"))?;
            let k: usize = v
                .text()
                .parse()
                .map_err(|_| parse_err(v.col(), format!("'n' needs a non-negative integer, found '{}'", v.text())))?;
            lib(v.col(), CoefficientFunction::monomial(k, n.max(k)))
        }
        "coeffs" => {
            let body = t.body.text();
            let Some(path) = body.strip_prefix('@') else {
                return Err(parse_err(t.body.col(), "expected '@<file>' after 'coeffs:'"));
            };
            if path.is_empty() {
                return Err(parse_err(t.body.col() + 1, "missing file name"));
            }
            // The path is taken verbatim from the original text so that spaces survive.
            let start = text.find('@').map_or(path.to_string(), |i| text[i + 1..].trim().to_string());
            read_coeffs(Path::new(&start))
        }
        other => Err(parse_err(
            kind_col,
            format!("unknown function kind '{other}' (expected fa, ga, mono or coeffs)"),
        )),
    }
}

/// Reads `index,re,im` rows (an optional header line is skipped).
pub fn read_coeffs(path: &Path) -> Result<CoefficientFunction> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
    let mut entries: Vec<(usize, Complex64)> = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Domain(format!("{}: {e}", path.display())))?;
        let line = rec.position().map_or(i as u64 + 1, |p| p.line());
        let bad = |m: String| Error::Domain(format!("{}:{line}: {m}", path.display()));
        if i == 0 && rec.get(0).is_some_and(|c| c.parse::<usize>().is_err()) {
            continue;
        }
        if rec.len() < 2 || rec.len() > 3 {
            return Err(bad(format!("expected index,re[,im], found {} columns", rec.len())));
        }
        let idx: usize = rec[0].parse().map_err(|_| bad(format!("bad index '{}'", &rec[0])))?;
        let num = |s: &str| -> Result<f64> {
            match s.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(bad(format!("bad number '{s}'"))),
            }
        };
        let re = num(&rec[1])?;
        let im = if rec.len() == 3 { num(&rec[2])? } else { 0.0 };
        if entries.iter().any(|(i, _)| *i == idx) {
            return Err(bad(format!("duplicate index {idx}")));
        }
        entries.push((idx, Complex64::new(re, im)));
    }
    let len = entries.iter().map(|(i, _)| i + 1).max().unwrap_or(0);
    if len == 0 {
        return Err(Error::Domain(format!("{} holds no coefficients", path.display())));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
    for (i, c) in entries {
        coeffs[i] = c;
    }
    CoefficientFunction::polynomial(coeffs)
}
