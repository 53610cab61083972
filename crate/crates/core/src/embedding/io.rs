//! word2vec text format: a `V d` header, then `token v1 … vd` per line.
//! Values are written with 17 significant digits, which round-trips f64 exactly.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use super::{EmbeddingError, EmbeddingModel, TokenVectors};
use crate::walks::{decode_token, encode_token};

/// Token vectors without training state, as loaded from an embedding file.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyedVectors {
    tokens: Vec<String>,
    index: HashMap<String, usize>,
    dims: usize,
    data: Vec<f64>,
}

impl KeyedVectors {
    pub fn new(tokens: Vec<String>, dims: usize, data: Vec<f64>) -> Self {
        assert_eq!(tokens.len() * dims, data.len());
        let index = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        KeyedVectors {
            tokens,
            index,
            dims,
            data,
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dims..(i + 1) * self.dims]
    }
}

impl TokenVectors for KeyedVectors {
    fn dimensions(&self) -> usize {
        self.dims
    }

    fn lookup(&self, token: &str) -> Option<&[f64]> {
        self.index.get(token).map(|&i| self.row(i))
    }
}

fn write_rows<'a, W: Write>(
    mut out: W,
    dims: usize,
    rows: impl ExactSizeIterator<Item = (&'a str, &'a [f64])>,
) -> std::io::Result<()> {
    writeln!(out, "{} {}", rows.len(), dims)?;
    let mut line = String::new();
    for (token, row) in rows {
        line.clear();
        line.push_str(&encode_token(token));
        for x in row {
            line.push(' ');
            line.push_str(&format!("{x:.16e}"));
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    out.flush()
}

/// Writes the input vectors of a trained model.
pub fn write_word2vec<W: Write>(model: &EmbeddingModel, out: W) -> std::io::Result<()> {
    let vocab = &model.vocab;
    write_rows(
        out,
        model.dimensions(),
        (0..vocab.len() as u32).map(|i| (vocab.token(i), model.input_row(i))),
    )
}

impl KeyedVectors {
    pub fn write<W: Write>(&self, out: W) -> std::io::Result<()> {
        write_rows(
            out,
            self.dims,
            (0..self.len()).map(|i| (self.tokens[i].as_str(), self.row(i))),
        )
    }
}

pub fn read_word2vec<R: BufRead>(input: R) -> Result<KeyedVectors, EmbeddingError> {
    let mut lines = input.lines();
    let header = lines.next().ok_or(EmbeddingError::Malformed {
        line: 1,
        reason: "missing header".into(),
    })??;
    let bad = |line: usize, reason: String| EmbeddingError::Malformed { line, reason };
    let mut parts = header.split_whitespace();
    let mut field = |name: &str| -> Result<usize, EmbeddingError> {
        parts
            .next()
            .ok_or_else(|| bad(1, format!("missing {name} in header")))?
            .parse()
            .map_err(|e| bad(1, format!("bad {name}: {e}")))
    };
    let count = field("vocabulary size")?;
    let dims = field("dimension")?;

    let mut tokens = Vec::with_capacity(count);
    let mut data = Vec::with_capacity(count * dims);
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split(' ');
        let token = decode_token(parts.next().unwrap_or_default());
        let before = data.len();
        for p in parts {
            data.push(
                p.parse::<f64>()
                    .map_err(|e| bad(line_no, format!("bad value {p:?}: {e}")))?,
            );
        }
        if data.len() - before != dims {
            return Err(bad(
                line_no,
                format!("expected {dims} values, found {}", data.len() - before),
            ));
        }
        tokens.push(token);
    }
    if tokens.len() != count {
        return Err(bad(
            1,
            format!("header declares {count} rows, found {}", tokens.len()),
        ));
    }
    Ok(KeyedVectors::new(tokens, dims, data))
}
