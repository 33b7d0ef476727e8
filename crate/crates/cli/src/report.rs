//! Tabular reports: TSV for machines, aligned columns for people.

use std::fmt::Write;

use subsum::counter::Cardinality;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Tsv,
    Pretty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Text(String),
    Card(Cardinality),
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<Cardinality> for Cell {
    fn from(c: Cardinality) -> Self {
        Cell::Card(c)
    }
}

impl Cell {
    fn render(&self, format: Format) -> String {
        match (self, format) {
            (Cell::Text(s), _) => s.clone(),
            (Cell::Card(c), Format::Tsv) => c.to_string(),
            (Cell::Card(c), Format::Pretty) => c.pretty(),
        }
    }
}

/// Rows under a commented header, then `# key<TAB>value` footer lines.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub footer: Vec<(String, String)>,
}

impl Report {
    pub fn new(header: &[&str]) -> Self {
        Report { header: header.iter().map(|h| h.to_string()).collect(), ..Report::default() }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        self.rows.push(cells);
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.footer.push((key.to_string(), value.to_string()));
    }

    pub fn render(&self, format: Format) -> String {
        let rows: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(|c| c.render(format)).collect()).collect();
        let mut out = String::new();
        match format {
            Format::Tsv => {
                if !self.header.is_empty() {
                    writeln!(out, "# {}", self.header.join("\t")).unwrap();
                }
                for r in &rows {
                    writeln!(out, "{}", r.join("\t")).unwrap();
                }
                for (k, v) in &self.footer {
                    writeln!(out, "# {k}\t{v}").unwrap();
                }
            }
            Format::Pretty => {
                let ncols = rows.iter().map(Vec::len).chain([self.header.len()]).max().unwrap_or(0);
                let mut widths = vec![0; ncols];
                for r in rows.iter().chain([&self.header]) {
                    for (i, c) in r.iter().enumerate() {
                        widths[i] = widths[i].max(c.chars().count());
                    }
                }
                let line = |r: &[String]| -> String {
                    let cells: Vec<String> = r
                        .iter()
                        .enumerate()
                        .map(|(i, c)| format!("{c}{}", " ".repeat(widths[i] - c.chars().count())))
                        .collect();
                    cells.join("  ").trim_end().to_string()
                };
                if !self.header.is_empty() {
                    writeln!(out, "{}", line(&self.header)).unwrap();
                    let total: usize = widths.iter().sum::<usize>() + 2 * ncols.saturating_sub(1);
                    writeln!(out, "{}", "-".repeat(total)).unwrap();
                }
                for r in &rows {
                    writeln!(out, "{}", line(r)).unwrap();
                }
                if !self.footer.is_empty() {
                    writeln!(out).unwrap();
                    let kw = self.footer.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                    for (k, v) in &self.footer {
                        writeln!(out, "{k:kw$}  {v}").unwrap();
                    }
                }
            }
        }
        out
    }
}

/// `{1, 2, omega}` in TSV, with glyphs in pretty output.
pub fn card_set(set: &[Cardinality], format: Format) -> String {
    let s: Vec<String> = set.iter().map(|c| Cell::Card(*c).render(format)).collect();
    format!("{{{}}}", s.join(", "))
}
