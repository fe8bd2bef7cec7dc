//! Plain-text files for explicit classes and single functions.
//!
//! A class file starts with `points=<n> labels=<k> hyps=<h>` followed by `h`
//! rows of `n` whitespace-separated label identifiers in `0..k`. A function
//! file starts with `points=<n>` followed by one such row. In both, blank
//! lines and everything after `#` are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::model::{ExplicitClass, Hypothesis, Label, LabelSpace, LabelValue};
use crate::{Error, Result};

struct Lines<'a> {
    path: PathBuf,
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str, path: &Path) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
                .filter(|(_, l)| !l.is_empty()),
        );
        Lines {
            path: path.to_path_buf(),
            inner: it.peekable(),
        }
    }

    fn error(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.clone(),
            line,
            message: message.into(),
        }
    }

    fn next_line(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let last = 0;
        self.inner
            .next()
            .ok_or_else(|| self.error(last, format!("unexpected end of file, expected {what}")))
    }

    fn finish(&mut self) -> Result<()> {
        match self.inner.next() {
            Some((line, _)) => Err(self.error(line, "unexpected trailing content")),
            None => Ok(()),
        }
    }

    fn header(&mut self, keys: &[&str]) -> Result<Vec<u64>> {
        let (line, text) = self.next_line("a header")?;
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != keys.len() {
            return Err(self.error(line, format!("header must be `{}`", header_template(keys))));
        }
        fields
            .iter()
            .zip(keys)
            .map(|(field, key)| {
                let value = field
                    .strip_prefix(key)
                    .and_then(|rest| rest.strip_prefix('='))
                    .ok_or_else(|| self.error(line, format!("expected `{key}=<number>`, found `{field}`")))?;
                value
                    .parse::<u64>()
                    .map_err(|e| self.error(line, format!("bad value for {key}: {e}")))
            })
            .collect()
    }

    fn row(&mut self, n: usize, k: u64) -> Result<Vec<Label>> {
        let (line, text) = self.next_line("a row of labels")?;
        let row = text
            .split_whitespace()
            .map(|t| {
                let v: u64 = t
                    .parse()
                    .map_err(|e| self.error(line, format!("bad label `{t}`: {e}")))?;
                if v >= k {
                    return Err(self.error(line, format!("label {v} is not below labels={k}")));
                }
                Ok(Label(v))
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != n {
            return Err(self.error(line, format!("row has {} labels, expected {n}", row.len())));
        }
        Ok(row)
    }
}

fn header_template(keys: &[&str]) -> String {
    keys.iter().map(|k| format!("{k}=<n>")).collect::<Vec<_>>().join(" ")
}

fn positive_u32(lines: &Lines<'_>, value: u64, key: &str) -> Result<u32> {
    u32::try_from(value)
        .ok()
        .filter(|&v| v > 0)
        .ok_or_else(|| lines.error(1, format!("{key} must be between 1 and {}", u32::MAX)))
}

/// Parses a class file's contents; `path` is used in error messages only.
pub fn parse_class(text: &str, path: &Path) -> Result<ExplicitClass> {
    let mut lines = Lines::new(text, path);
    let h = lines.header(&["points", "labels", "hyps"])?;
    let n = positive_u32(&lines, h[0], "points")?;
    let k = positive_u32(&lines, h[1], "labels")?;
    let count = h[2];
    if count == 0 {
        return Err(lines.error(1, "hyps must be at least 1"));
    }
    let mut rows = Vec::new();
    for _ in 0..count {
        rows.push(lines.row(n as usize, k as u64)?);
    }
    lines.finish()?;
    ExplicitClass::new(n, LabelSpace::anonymous(k as usize), rows)
}

pub fn read_class(path: &Path) -> Result<ExplicitClass> {
    parse_class(&fs::read_to_string(path)?, path)
}

/// Serialises a class. Labels are written by identifier; non-anonymous label
/// values are listed in a leading comment.
pub fn format_class(class: &ExplicitClass) -> String {
    let mut out = String::new();
    for label in class.labels().labels() {
        match class.label_value(label) {
            Some(LabelValue::Atom(name)) if *name == label.0.to_string() => {}
            Some(value) => {
                let _ = writeln!(out, "# label {} = {}", label, value);
            }
            None => {}
        }
    }
    let _ = writeln!(
        out,
        "points={} labels={} hyps={}",
        class.domain_size(),
        class.labels().len(),
        class.len()
    );
    for row in class.rows() {
        out.push_str(&format_row(row));
    }
    out
}

fn format_row(row: &[Label]) -> String {
    let mut line = row.iter().map(|l| l.0.to_string()).collect::<Vec<_>>().join(" ");
    line.push('\n');
    line
}

pub fn write_class(class: &ExplicitClass, path: &Path) -> Result<()> {
    fs::write(path, format_class(class))?;
    Ok(())
}

/// Parses a function file. Labels are checked against `labels` when given.
pub fn parse_function(text: &str, path: &Path, labels: Option<usize>) -> Result<Hypothesis> {
    let mut lines = Lines::new(text, path);
    let h = lines.header(&["points"])?;
    let n = positive_u32(&lines, h[0], "points")?;
    let row = lines.row(n as usize, labels.map_or(u64::MAX, |k| k as u64))?;
    lines.finish()?;
    Ok(Hypothesis::table(row))
}

pub fn read_function(path: &Path, labels: Option<usize>) -> Result<Hypothesis> {
    parse_function(&fs::read_to_string(path)?, path, labels)
}

pub fn format_function(f: &Hypothesis) -> String {
    format!("points={}\n{}", f.domain_size(), format_row(&f.to_table()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{cantor_explicit, random_class, DEFAULT_EXPLICIT_CAP};
    use crate::rng::RandomSource;

    fn p() -> &'static Path {
        Path::new("test.class")
    }

    #[test]
    fn round_trip() {
        let class = random_class(4, 3, 6, &mut RandomSource::new(5).rng()).unwrap();
        let back = parse_class(&format_class(&class), p()).unwrap();
        assert_eq!(back.len(), class.len());
        assert!(class.rows().zip(back.rows()).all(|(a, b)| a == b));

        let cantor = cantor_explicit(1, 3, DEFAULT_EXPLICIT_CAP).unwrap();
        let text = format_class(&cantor);
        assert!(text.starts_with("# label 0 = *\n"));
        assert_eq!(parse_class(&text, p()).unwrap().len(), 4);

        let f = Hypothesis::table(vec![Label(2), Label(0)]);
        assert_eq!(parse_function(&format_function(&f), p(), Some(3)).unwrap(), f);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# a class\n\npoints=2 labels=2 hyps=2\n0 1 # first\n\n1 0\n";
        assert_eq!(parse_class(text, p()).unwrap().len(), 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("points=2 labels=2\n0 1\n", 1),
            ("points=2 labels=2 hyps=1\n0 2\n", 2),
            ("points=2 labels=2 hyps=1\n0\n", 2),
            ("points=2 labels=2 hyps=1\n0 1\n1 1\n", 3),
            ("points=x labels=2 hyps=1\n0 1\n", 1),
        ];
        for (text, want) in cases {
            match parse_class(text, p()) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert!(matches!(parse_class("points=2 labels=2 hyps=2\n0 1\n", p()), Err(Error::Parse { .. })));
    }
}
