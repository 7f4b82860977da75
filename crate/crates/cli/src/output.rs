//! Deterministic CSV/JSON emission with write-then-rename.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// Shortest decimal that round-trips to the same `f64`.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

/// Writes `contents` to a sibling temporary file, then renames it over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp{}", std::process::id()));
    let result = fs::File::create(&tmp)
        .and_then(|mut f| {
            f.write_all(contents.as_bytes())?;
            f.sync_all()
        })
        .and_then(|()| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(io_err(path))
}

/// A CSV table with a mandatory header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write(&self, dir: &Path, name: &str) -> Result<PathBuf, CliError> {
        let path = dir.join(name);
        write_atomic(&path, &self.render())?;
        log::info!("wrote {}", path.display());
        Ok(path)
    }
}

/// `x,p` table of a distribution.
pub fn distribution_table(probs: &[f64]) -> Table {
    let mut t = Table::new(["x", "p"]);
    for (x, p) in probs.iter().enumerate() {
        t.push(vec![x.to_string(), num(*p)]);
    }
    t
}

pub fn write_json(dir: &Path, name: &str, value: &serde_json::Value) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    write_atomic(&path, &text)?;
    Ok(path)
}

/// A matplotlib script plotting `p` against `x` for each `(label, csv)`.
pub fn plot_script(series: &[(String, String)], title: &str) -> String {
    let mut s = String::from(
        "#!/usr/bin/env python3\n\
         import csv\n\
         import os\n\
         import matplotlib.pyplot as plt\n\
         \n\
         HERE = os.path.dirname(os.path.abspath(__file__))\n\
         \n\
         def load(name):\n\
         \x20   with open(os.path.join(HERE, name)) as f:\n\
         \x20       rows = list(csv.DictReader(f))\n\
         \x20   return [int(r[\"x\"]) for r in rows], [float(r[\"p\"]) for r in rows]\n\
         \n\
         fig, ax = plt.subplots()\n",
    );
    for (i, (label, file)) in series.iter().enumerate() {
        let marker = ["o", "s", "^", "x", "d"][i % 5];
        s.push_str(&format!(
            "x, p = load({file:?})\nax.plot(x, p, marker={marker:?}, label={label:?})\n"
        ));
    }
    s.push_str(&format!(
        "ax.set_xlabel(\"x\")\nax.set_ylabel(\"time-averaged probability\")\nax.set_title({title:?})\n\
         ax.legend()\nfig.savefig(os.path.join(HERE, \"average.png\"), dpi=150)\n"
    ));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [0.25, 1.0, 1e-20, 0.1 + 0.2, -3.5e300] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(num(0.5), "0.5");
    }

    #[test]
    fn table_render() {
        let t = distribution_table(&[0.25, 0.5, 0.25]);
        assert_eq!(t.render(), "x,p\n0,0.25\n1,0.5\n2,0.25\n");
    }

    #[test]
    fn plot_script_mentions_files() {
        let s = plot_script(&[("theorem".into(), "average_theorem.csv".into())], "n = 1");
        assert!(s.contains("load(\"average_theorem.csv\")"));
        assert!(s.contains("label=\"theorem\""));
    }
}
