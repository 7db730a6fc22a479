//! The run report. Text output is rendered from the same value that is
//! serialised under `--json`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use hypergame::{BaseGame, RankTable, StrategyProfile, SubjectiveGame};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub row: String,
    pub col: String,
    pub r_row: i64,
    pub r_col: i64,
}

/// A matrix as a list of cells, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Matrix {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub cells: Vec<Cell>,
}

impl Matrix {
    pub fn from_ranks(table: &RankTable) -> Self {
        Matrix {
            rows: table.rows().iter().map(ToString::to_string).collect(),
            cols: table.cols().iter().map(ToString::to_string).collect(),
            cells: table
                .cells()
                .map(|(a, b, (u, v))| Cell {
                    row: a.to_string(),
                    col: b.to_string(),
                    r_row: u.into(),
                    r_col: v.into(),
                })
                .collect(),
        }
    }

    pub fn from_payoffs(base: &BaseGame) -> Self {
        let mut cells = Vec::with_capacity(base.cell_count());
        for (i, a) in base.row_options().iter().enumerate() {
            for (j, b) in base.col_options().iter().enumerate() {
                let (u, v) = base.payoff_at(i, j);
                cells.push(Cell {
                    row: a.to_string(),
                    col: b.to_string(),
                    r_row: u,
                    r_col: v,
                });
            }
        }
        Matrix {
            rows: base.row_options().iter().map(ToString::to_string).collect(),
            cols: base.col_options().iter().map(ToString::to_string).collect(),
            cells,
        }
    }

    /// Cell values as `(r_row, r_col)` tuples, row-major.
    pub fn tuples(&self) -> Vec<(i64, i64)> {
        self.cells.iter().map(|c| (c.r_row, c.r_col)).collect()
    }

    fn write_text(&self, out: &mut String, indent: &str) {
        let labels: Vec<String> = self
            .cells
            .iter()
            .map(|c| format!("({}, {})", c.r_row, c.r_col))
            .collect();
        let first = self.rows.iter().map(String::len).max().unwrap_or(0);
        let widths: Vec<usize> = (0..self.cols.len())
            .map(|j| {
                (0..self.rows.len())
                    .map(|i| labels[i * self.cols.len() + j].len())
                    .chain([self.cols[j].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut line = format!("{indent}{:first$}", "");
        for (j, c) in self.cols.iter().enumerate() {
            let _ = write!(line, "  {:w$}", c, w = widths[j]);
        }
        out.push_str(line.trim_end());
        out.push('\n');
        for (i, r) in self.rows.iter().enumerate() {
            let mut line = format!("{indent}{r:first$}");
            for (j, w) in widths.iter().enumerate() {
                let _ = write!(line, "  {:w$}", labels[i * self.cols.len() + j], w = *w);
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Profile {
    pub row: String,
    pub col: String,
}

impl From<&StrategyProfile> for Profile {
    fn from(p: &StrategyProfile) -> Self {
        Profile {
            row: p.row.to_string(),
            col: p.col.to_string(),
        }
    }
}

impl std::fmt::Display for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViewSummary {
    pub player: String,
    pub role: String,
    pub matrix: Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolvedView {
    /// `base` or the owning player's name.
    pub source: String,
    pub matrix: Matrix,
    pub equilibria: Vec<Profile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub believed_rows: Vec<String>,
    pub believed_cols: Vec<String>,
    pub matrix: Matrix,
}

impl From<&SubjectiveGame> for Candidate {
    fn from(g: &SubjectiveGame) -> Self {
        Candidate {
            believed_rows: g.believed_rows().iter().map(ToString::to_string).collect(),
            believed_cols: g.believed_cols().iter().map(ToString::to_string).collect(),
            matrix: Matrix::from_ranks(g.table()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlayerReport {
    pub player: String,
    pub role: String,
    pub estimate: u128,
    pub generated: u64,
    pub level_retained: usize,
    pub retained: Vec<Candidate>,
}

/// A hypergame as one retained-candidate index per player (1-based, in
/// player order).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypergameEntry {
    pub views: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Results {
    Validate {
        players: Vec<(String, String)>,
        target: Option<Profile>,
        base: Matrix,
        views: Vec<ViewSummary>,
    },
    Solve {
        views: Vec<SolvedView>,
    },
    Rationalise {
        target: Profile,
        concept: String,
        level: u8,
        rationalisable: bool,
        players: Vec<PlayerReport>,
        hypergame_count: usize,
        hypergames: Vec<HypergameEntry>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    /// Canonical rendering of the input file.
    pub input: String,
    pub configuration: BTreeMap<String, String>,
    pub warnings: Vec<String>,
    pub results: Results,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        for (k, v) in &self.configuration {
            let _ = writeln!(out, "  {k}: {v}");
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out.push_str("input:\n");
        for line in self.input.lines() {
            let _ = writeln!(out, "  {line}");
        }
        match &self.results {
            Results::Validate {
                players,
                target,
                base,
                views,
            } => {
                out.push_str("valid\n");
                for (p, r) in players {
                    let _ = writeln!(out, "player {p}: {r}");
                }
                if let Some(t) = target {
                    let _ = writeln!(out, "chosen: {t}");
                }
                out.push_str("base payoffs:\n");
                base.write_text(&mut out, "  ");
                for v in views {
                    let _ = writeln!(out, "view of {} ({}):", v.player, v.role);
                    v.matrix.write_text(&mut out, "  ");
                }
            }
            Results::Solve { views } => {
                for v in views {
                    let _ = writeln!(out, "{}:", v.source);
                    v.matrix.write_text(&mut out, "  ");
                    let ne: Vec<String> = v.equilibria.iter().map(ToString::to_string).collect();
                    let _ = writeln!(out, "  NE = {{{}}}", ne.join(", "));
                }
            }
            Results::Rationalise {
                target,
                concept,
                level,
                rationalisable,
                players,
                hypergame_count,
                hypergames,
            } => {
                let _ = writeln!(out, "target: {target}  concept: {concept}  level: {level}");
                for p in players {
                    let _ = writeln!(
                        out,
                        "player {} ({}): estimate {}, generated {}, retained {}, level-compatible {}",
                        p.player,
                        p.role,
                        p.estimate,
                        p.generated,
                        p.retained.len(),
                        p.level_retained
                    );
                    for (k, c) in p.retained.iter().enumerate() {
                        let _ = writeln!(
                            out,
                            "  #{}  rows {{{}}}  cols {{{}}}",
                            k + 1,
                            c.believed_rows.join(", "),
                            c.believed_cols.join(", ")
                        );
                        c.matrix.write_text(&mut out, "    ");
                    }
                }
                let _ = writeln!(out, "hypergames: {hypergame_count}");
                let names: Vec<&str> = players.iter().map(|p| p.player.as_str()).collect();
                for (k, h) in hypergames.iter().enumerate() {
                    let parts: Vec<String> = names
                        .iter()
                        .zip(&h.views)
                        .map(|(n, i)| format!("{n}#{i}"))
                        .collect();
                    let _ = writeln!(out, "  H{}: {}", k + 1, parts.join(" "));
                }
                if !rationalisable {
                    out.push_str("no belief structure rationalises the target\n");
                }
            }
        }
        out
    }
}
