use std::fmt;
use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::Value;

use pwldepth::depth::{Bounds, DepthInterval, RuleApplication};
use pwldepth::polydepth::PolyRuleApplication;
use pwldepth::{rational, Point};

use crate::args::Global;

/// A check carried out by a command did not hold.
#[derive(Debug)]
pub struct Failure(pub String);

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "verification failed: {}", self.0)
    }
}

impl std::error::Error for Failure {}

pub fn read_text(path: Option<&Path>) -> Result<String> {
    let mut s = String::new();
    match path {
        Some(p) if p != Path::new("-") => {
            s = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        }
        _ => {
            io::stdin().read_to_string(&mut s).context("reading stdin")?;
        }
    }
    Ok(s)
}

pub fn read_json(path: Option<&Path>) -> Result<Value> {
    let text = read_text(path)?;
    if text.trim().is_empty() {
        bail!("expected JSON input, found nothing");
    }
    Ok(pwldepth::io::parse_json(&text)?)
}

/// Where a command writes its result.
pub struct Out<'a> {
    pub g: &'a Global,
    buf: String,
}

impl<'a> Out<'a> {
    pub fn new(g: &'a Global) -> Self {
        Out { g, buf: String::new() }
    }

    pub fn json(&mut self, v: &Value) -> Result<()> {
        self.buf.push_str(&serde_json::to_string_pretty(v)?);
        self.buf.push('\n');
        Ok(())
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        self.buf.push_str(s.as_ref());
        self.buf.push('\n');
    }

    /// Prose that `--quiet` suppresses.
    pub fn note(&self, s: impl AsRef<str>) {
        if !self.g.quiet {
            eprintln!("{}", s.as_ref());
        }
    }

    /// JSON under `--json`, otherwise the text rendering.
    pub fn report(&mut self, v: &Value, text: impl FnOnce(&mut Self)) -> Result<()> {
        if self.g.json {
            self.json(v)
        } else {
            text(self);
            Ok(())
        }
    }

    pub fn finish(self) -> Result<()> {
        match &self.g.output {
            Some(p) if p != Path::new("-") => {
                fs::write(p, &self.buf).with_context(|| format!("writing {}", p.display()))?
            }
            _ => {
                let mut stdout = io::stdout().lock();
                stdout.write_all(self.buf.as_bytes())?;
                stdout.flush()?;
            }
        }
        Ok(())
    }
}

pub fn parse_point(s: &str) -> Result<Point> {
    let coords = s
        .split(',')
        .map(|c| rational::parse(c.trim()))
        .collect::<pwldepth::Result<Vec<_>>>()
        .with_context(|| format!("parsing point {s:?}"))?;
    Ok(Point::new(coords))
}

pub fn parse_points(s: &str) -> Result<Vec<Point>> {
    s.split(';').filter(|p| !p.trim().is_empty()).map(parse_point).collect()
}

/// `LO,HI` or a single exact value.
pub fn parse_bounds(s: &str) -> Result<Bounds> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<usize>().with_context(|| format!("bad depth {t:?} in {s:?}"));
    let (lo, hi) = match parts.as_slice() {
        [m] => (num(m)?, num(m)?),
        [l, u] => (num(l)?, num(u)?),
        _ => bail!("expected LO,HI, found {s:?}"),
    };
    if lo > hi {
        bail!("empty interval [{lo}, {hi}]");
    }
    Ok(Bounds::new(lo, hi))
}

fn rule_name(v: &Value) -> (String, String) {
    let name = v.get("rule").and_then(Value::as_str).unwrap_or("?").to_string();
    let inputs = v.get("inputs").map(Value::to_string).unwrap_or_default();
    (name, inputs)
}

pub fn certificate_lines(out: &mut Out, cert: &[RuleApplication]) -> Result<()> {
    out.line("certificate:");
    for (i, app) in cert.iter().enumerate() {
        let (name, inputs) = rule_name(&serde_json::to_value(app)?);
        let flag = if app.conditional { " (conditional)" } else { "" };
        out.line(format!(
            "  {}. {name} {inputs} => {}{flag}  [{}]",
            i + 1,
            app.result,
            app.paper_anchor
        ));
    }
    Ok(())
}

pub fn poly_certificate_lines(out: &mut Out, cert: &[PolyRuleApplication]) -> Result<()> {
    out.line("certificate:");
    for (i, app) in cert.iter().enumerate() {
        let (name, inputs) = rule_name(&serde_json::to_value(app)?);
        let show = |b: Option<usize>| b.map_or("-".to_string(), |d| d.to_string());
        out.line(format!(
            "  {}. {name} {inputs} => lower {}, upper {}  [{}]",
            i + 1,
            show(app.lower),
            show(app.upper),
            app.paper_anchor
        ));
    }
    Ok(())
}

pub fn interval_report(out: &mut Out, label: &str, i: &DepthInterval) -> Result<()> {
    if out.g.json {
        return out.json(&serde_json::to_value(i)?);
    }
    out.line(format!("{label}: {}", i.bounds()));
    if i.is_conditional() {
        out.line("conditional on the depth conjecture");
    }
    certificate_lines(out, &i.certificate)
}
