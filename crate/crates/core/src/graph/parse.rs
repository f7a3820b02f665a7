use super::{valid_id, Count, Graph, GraphBuilder};
use crate::error::{Error, Result};

/// Parses the line-based graph format:
///
/// ```text
/// graph <name>
/// vertex <id>
/// edge <id> <src> <dst>          # multiplicity 1
/// edge <id> <src> <dst> x<N>     # multiplicity N >= 1
/// edge <id> <src> <dst> xinf     # multiplicity ω
/// ```
///
/// `#` starts a comment. Declaration order is preserved.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut builder: Option<GraphBuilder> = None;
    let mut last_line = 0;

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(content);
        let Some(&(col, keyword)) = tokens.first() else {
            continue;
        };
        let syntax = |col: usize, message: String| Error::Syntax { line, col, message };

        match keyword {
            "graph" => {
                if builder.is_some() {
                    return Err(syntax(col, "duplicate `graph` header".into()));
                }
                let [_, (ncol, name)] = tokens[..] else {
                    return Err(syntax(col, "expected `graph <name>`".into()));
                };
                if !valid_id(name) {
                    return Err(syntax(ncol, format!("invalid graph name `{name}`")));
                }
                builder = Some(Graph::builder(name));
            }
            "vertex" | "edge" => {
                let Some(b) = builder.as_mut() else {
                    return Err(syntax(col, "expected `graph <name>` header first".into()));
                };
                if keyword == "vertex" {
                    let [_, (vcol, id)] = tokens[..] else {
                        return Err(syntax(col, "expected `vertex <id>`".into()));
                    };
                    if !valid_id(id) {
                        return Err(syntax(vcol, format!("invalid vertex id `{id}`")));
                    }
                    b.vertex(id)
                        .map_err(|source| Error::InvalidGraphAt { line, source })?;
                } else {
                    let (id, src, dst, mult) = match tokens[..] {
                        [_, id, src, dst] => (id, src, dst, None),
                        [_, id, src, dst, m] => (id, src, dst, Some(m)),
                        _ => {
                            return Err(syntax(
                                col,
                                "expected `edge <id> <src> <dst> [x<N>|xinf]`".into(),
                            ))
                        }
                    };
                    for (c, tok) in [id, src, dst] {
                        if !valid_id(tok) {
                            return Err(syntax(c, format!("invalid identifier `{tok}`")));
                        }
                    }
                    let multiplicity = match mult {
                        None => Count::ONE,
                        Some((mcol, m)) => parse_multiplicity(m)
                            .ok_or_else(|| syntax(mcol, format!("invalid multiplicity `{m}`")))?,
                    };
                    b.bundle(id.1, src.1, dst.1, multiplicity)
                        .map_err(|source| Error::InvalidGraphAt { line, source })?;
                }
            }
            other => return Err(syntax(col, format!("unknown directive `{other}`"))),
        }
    }

    match builder {
        Some(b) => b.build(),
        None => Err(Error::Syntax {
            line: last_line.max(1),
            col: 1,
            message: "missing `graph <name>` header".into(),
        }),
    }
}

fn parse_multiplicity(token: &str) -> Option<Count> {
    let rest = token.strip_prefix('x')?;
    if rest == "inf" {
        return Some(Count::Omega);
    }
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    // x0 parses here and is rejected by the builder as a zero multiplicity.
    rest.parse().ok().map(Count::Finite)
}

/// Whitespace-separated tokens with their 1-based starting column.
fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(s, tok)| (line[..s].chars().count() + 1, tok))
        .collect()
}
