//! Complex file I/O.
//!
//! Text format: first line `n=<int>`, then one triangle per line as three
//! space-separated 1-based vertex labels; `#` starts a comment. A JSON
//! alternative `{"n": int, "faces": [[i,j,k], ...]}` is accepted on read
//! (detected by a leading `{`) and written by `complex_to_json`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::complex::{Complex2, Triangle};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    n: u32,
    faces: Vec<[u32; 3]>,
}

pub fn parse_complex(text: &str) -> Result<Complex2> {
    if text.trim_start().starts_with('{') {
        let parsed: ComplexJson = serde_json::from_str(text)?;
        return Complex2::from_triples(parsed.n, &parsed.faces);
    }

    let mut n: Option<u32> = None;
    let mut triples: Vec<[u32; 3]> = Vec::new();
    let mut seen: Vec<u32> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        match n {
            None => {
                let rest = content
                    .strip_prefix("n=")
                    .or_else(|| content.strip_prefix("n ="))
                    .ok_or_else(|| Error::Parse {
                        line,
                        msg: format!("expected header `n=<int>`, got {content:?}"),
                    })?;
                let value: u32 = rest.trim().parse().map_err(|_| Error::Parse {
                    line,
                    msg: format!("bad vertex count {rest:?}"),
                })?;
                n = Some(value);
            }
            Some(nv) => {
                let mut vs = [0u32; 3];
                let mut count = 0;
                for tok in content.split_whitespace() {
                    if count == 3 {
                        return Err(Error::Parse {
                            line,
                            msg: "expected exactly three vertex labels".into(),
                        });
                    }
                    vs[count] = tok.parse().map_err(|_| Error::Parse {
                        line,
                        msg: format!("bad vertex label {tok:?}"),
                    })?;
                    count += 1;
                }
                if count != 3 {
                    return Err(Error::Parse {
                        line,
                        msg: "expected exactly three vertex labels".into(),
                    });
                }
                vs.sort_unstable();
                if vs[0] == vs[1] || vs[1] == vs[2] {
                    return Err(Error::Parse {
                        line,
                        msg: format!("degenerate triangle ({} {} {})", vs[0], vs[1], vs[2]),
                    });
                }
                if vs[0] < 1 || vs[2] > nv {
                    return Err(Error::Parse {
                        line,
                        msg: format!(
                            "vertex out of range 1..={nv} in ({} {} {})",
                            vs[0], vs[1], vs[2]
                        ),
                    });
                }
                let idx = Triangle::new(vs[0], vs[1], vs[2])
                    .and_then(|t| t.index(nv))
                    .map_err(|e| Error::Parse {
                        line,
                        msg: e.to_string(),
                    })?;
                if seen.contains(&idx) {
                    return Err(Error::Parse {
                        line,
                        msg: format!("duplicate triangle ({} {} {})", vs[0], vs[1], vs[2]),
                    });
                }
                seen.push(idx);
                triples.push(vs);
            }
        }
    }
    let n = n.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        msg: "missing `n=<int>` header".into(),
    })?;
    Complex2::from_triples(n, &triples)
}

/// Canonical text form: header, then sorted triples.
pub fn complex_to_text(c: &Complex2) -> String {
    let mut out = format!("n={}\n", c.n());
    for t in c.triangles() {
        let [i, j, k] = t.vertices();
        out.push_str(&format!("{i} {j} {k}\n"));
    }
    out
}

pub fn complex_to_json(c: &Complex2) -> String {
    let doc = ComplexJson {
        n: c.n(),
        faces: c.triangles().iter().map(|t| t.vertices()).collect(),
    };
    serde_json::to_string(&doc).expect("complex serializes")
}

pub fn read_complex(path: impl AsRef<Path>) -> Result<Complex2> {
    parse_complex(&fs::read_to_string(path)?)
}

pub fn write_complex(c: &Complex2, path: impl AsRef<Path>) -> Result<()> {
    Ok(fs::write(path, complex_to_text(c))?)
}
