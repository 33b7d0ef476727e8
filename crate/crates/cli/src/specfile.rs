//! TOML series files.
//!
//! ```toml
//! label = "doubled half"
//! prefix = ["1/2", 1]
//!
//! [tail]
//! kind = "multigeometric"
//! coeffs = ["1/2", "1/2"]
//! q = "1/2"
//! ```
//!
//! Rationals are `"p/q"` strings or integer literals. Blocks tails take
//! `base`, `sizes` (`"n"`, `"3"`, `"2n+1"`) and an optional `pattern` of
//! `"coef@shift + ..."` entries.

use serde::Deserialize;
use subsum::series::{fmt_rat, parse_rat, BlockEntry, BlocksTail, Rat, SeriesSpec, SizeRule, TailSpec};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpecFileError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{0}")]
    Semantic(String),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Lit {
    Int(i64),
    Str(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    label: Option<String>,
    #[serde(default)]
    prefix: Vec<Lit>,
    tail: Option<RawTail>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTail {
    kind: String,
    c: Option<Lit>,
    q: Option<Lit>,
    coeffs: Option<Vec<Lit>>,
    base: Option<u64>,
    sizes: Option<Lit>,
    pattern: Option<Vec<String>>,
}

fn semantic(msg: impl Into<String>) -> SpecFileError {
    SpecFileError::Semantic(msg.into())
}

fn lit(l: &Lit, what: &str) -> Result<Rat, SpecFileError> {
    match l {
        Lit::Int(k) => Ok(Rat::from_integer((*k).into())),
        Lit::Str(s) => parse_rat(s).ok_or_else(|| semantic(format!("{what}: not a rational: {s:?}"))),
    }
}

fn need<'a, T>(v: &'a Option<T>, key: &str, kind: &str) -> Result<&'a T, SpecFileError> {
    v.as_ref().ok_or_else(|| semantic(format!("{kind} tail needs `{key}`")))
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.chars().rev().take_while(|&c| c != '\n').count() + 1;
    (line, column)
}

pub fn parse_spec(text: &str) -> Result<SeriesSpec, SpecFileError> {
    let raw: RawSpec = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_col(text, s.start));
        SpecFileError::Syntax { line, column, message: e.message().to_string() }
    })?;
    let prefix = raw
        .prefix
        .iter()
        .enumerate()
        .map(|(i, l)| lit(l, &format!("prefix[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let tail = match raw.tail {
        None => TailSpec::Zero,
        Some(t) => match t.kind.as_str() {
            "zero" => TailSpec::Zero,
            "geometric" => TailSpec::Geometric {
                c: lit(need(&t.c, "c", "geometric")?, "c")?,
                q: lit(need(&t.q, "q", "geometric")?, "q")?,
            },
            "multigeometric" => TailSpec::Multigeometric {
                coeffs: need(&t.coeffs, "coeffs", "multigeometric")?
                    .iter()
                    .map(|l| lit(l, "coeffs"))
                    .collect::<Result<_, _>>()?,
                q: lit(need(&t.q, "q", "multigeometric")?, "q")?,
            },
            "blocks" => {
                let base = *need(&t.base, "base", "blocks")?;
                let sizes = match need(&t.sizes, "sizes", "blocks")? {
                    Lit::Int(k) if *k > 0 => SizeRule::constant(*k as u64),
                    Lit::Str(s) => SizeRule::parse(s).ok_or_else(|| semantic(format!("bad sizes {s:?}")))?,
                    Lit::Int(k) => return Err(semantic(format!("bad sizes {k}"))),
                };
                let mut b = BlocksTail::new(base, sizes);
                if let Some(p) = &t.pattern {
                    b.pattern = p
                        .iter()
                        .map(|s| match s.trim() {
                            "unit" => Ok(BlockEntry::unit()),
                            e => BlockEntry::parse(e).ok_or_else(|| semantic(format!("bad pattern entry {s:?}"))),
                        })
                        .collect::<Result<_, _>>()?;
                }
                TailSpec::Blocks(b)
            }
            other => return Err(semantic(format!("unknown tail kind {other:?}"))),
        },
    };
    let mut spec = SeriesSpec::new(prefix, tail);
    spec.label = raw.label;
    spec.validate().map_err(|e| semantic(e.to_string()))?;
    Ok(spec)
}

fn quoted(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

fn rats(v: &[Rat]) -> String {
    let s: Vec<String> = v.iter().map(|r| quoted(&fmt_rat(r))).collect();
    format!("[{}]", s.join(", "))
}

pub fn render_spec(spec: &SeriesSpec) -> String {
    let mut out = String::new();
    if let Some(l) = &spec.label {
        out += &format!("label = {}\n", quoted(l));
    }
    out += &format!("prefix = {}\n", rats(&spec.prefix));
    out += "\n[tail]\n";
    out += &format!("kind = {}\n", quoted(spec.tail.kind()));
    match &spec.tail {
        TailSpec::Zero => {}
        TailSpec::Geometric { c, q } => {
            out += &format!("c = {}\nq = {}\n", quoted(&fmt_rat(c)), quoted(&fmt_rat(q)));
        }
        TailSpec::Multigeometric { coeffs, q } => {
            out += &format!("coeffs = {}\nq = {}\n", rats(coeffs), quoted(&fmt_rat(q)));
        }
        TailSpec::Blocks(b) => {
            let p: Vec<String> = b.pattern.iter().map(|e| quoted(&e.to_string())).collect();
            out += &format!("base = {}\nsizes = {}\npattern = [{}]\n", b.base, quoted(&b.sizes.to_string()), p.join(", "));
        }
    }
    out
}
