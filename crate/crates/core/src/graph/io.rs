//! Plain-text graph format.
//!
//! One record per line. A `kind DAG|MAG` header is required, `node <id>`
//! declarations come first, then `edge <idA> <markA> <markB> <idB>` records
//! where a mark is `-` (tail) or `>` (arrow):
//!
//! ```text
//! kind MAG
//! node X
//! node Y
//! node V3
//! edge X - > Y
//! edge X > > V3
//! ```
//!
//! `edge X - > Y` is X → Y, `edge X > > V3` is X ↔ V3. Blank lines and lines
//! starting with `#` are ignored.

use super::{GraphBuilder, GraphError, GraphKind, Mark, MixedGraph};
use std::fmt::Write as _;
use std::path::Path;

fn mark_to_str(m: Mark) -> &'static str {
    match m {
        Mark::Tail => "-",
        Mark::Arrow => ">",
    }
}

fn mark_from_str(s: &str, line: usize) -> Result<Mark, GraphError> {
    match s {
        "-" => Ok(Mark::Tail),
        ">" => Ok(Mark::Arrow),
        other => Err(GraphError::Parse {
            line,
            msg: format!("bad mark `{other}`, expected `-` or `>`"),
        }),
    }
}

impl MixedGraph {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let kind = match self.kind() {
            GraphKind::Dag => "DAG",
            GraphKind::Mag => "MAG",
        };
        writeln!(out, "kind {kind}").unwrap();
        for v in self.nodes() {
            writeln!(out, "node {v}").unwrap();
        }
        for e in self.edges() {
            writeln!(
                out,
                "edge {} {} {} {}",
                self.name_of(e.a),
                mark_to_str(e.mark_a),
                mark_to_str(e.mark_b),
                self.name_of(e.b),
            )
            .unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<MixedGraph, GraphError> {
        let mut builder: Option<GraphBuilder> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            match fields[0] {
                "kind" => {
                    if builder.is_some() {
                        return Err(GraphError::Parse {
                            line,
                            msg: "duplicate kind header".into(),
                        });
                    }
                    let kind = match fields.get(1).copied() {
                        Some("DAG") => GraphKind::Dag,
                        Some("MAG") => GraphKind::Mag,
                        other => {
                            return Err(GraphError::Parse {
                                line,
                                msg: format!("bad kind `{}`", other.unwrap_or("")),
                            })
                        }
                    };
                    builder = Some(GraphBuilder::new(kind));
                }
                "node" => {
                    let b = builder.as_mut().ok_or(GraphError::Parse {
                        line,
                        msg: "kind header must come first".into(),
                    })?;
                    let name = fields.get(1).ok_or(GraphError::Parse {
                        line,
                        msg: "node needs a name".into(),
                    })?;
                    b.node(*name)?;
                }
                "edge" => {
                    let b = builder.as_mut().ok_or(GraphError::Parse {
                        line,
                        msg: "kind header must come first".into(),
                    })?;
                    if fields.len() < 5 {
                        return Err(GraphError::Parse {
                            line,
                            msg: "edge needs `edge A mark mark B`".into(),
                        });
                    }
                    let ma = mark_from_str(fields[2], line)?;
                    let mb = mark_from_str(fields[3], line)?;
                    b.edge(fields[1], ma, mb, fields[4])?;
                }
                // `w=`-suffixed edge lines and `noise` lines belong to the
                // SCM format layered on top of this one; reject them here.
                other => {
                    return Err(GraphError::Parse {
                        line,
                        msg: format!("unknown record `{other}`"),
                    })
                }
            }
        }
        builder
            .ok_or(GraphError::Parse {
                line: 0,
                msg: "missing kind header".into(),
            })?
            .build()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), GraphError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<MixedGraph, GraphError> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn round_trip_keeps_structure_and_order() {
        let g = fixtures::fig4_mag();
        let text = g.to_text();
        let back = MixedGraph::from_text(&text).unwrap();
        assert_eq!(g.nodes(), back.nodes());
        assert!(g.same_structure(&back));
        assert_eq!(text, back.to_text());
    }

    #[test]
    fn parses_documented_example() {
        let text = "kind MAG\nnode X\nnode Y\nnode V3\nedge X - > Y\nedge X > > V3\n";
        let g = MixedGraph::from_text(text).unwrap();
        assert!(g.has_directed_edge("X", "Y"));
        assert_eq!(
            g.edge_between("X", "V3"),
            Some((Mark::Arrow, Mark::Arrow))
        );
    }

    #[test]
    fn rejects_garbage() {
        assert!(MixedGraph::from_text("node X\n").is_err());
        assert!(MixedGraph::from_text("kind PAG\n").is_err());
        assert!(MixedGraph::from_text("kind DAG\nedge A - ? B\n").is_err());
        assert!(MixedGraph::from_text("kind DAG\nwobble\n").is_err());
    }
}
