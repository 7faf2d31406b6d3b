//! Text format for trained networks.
//!
//! ```text
//! punn-model 1
//! inputs <k>
//! classes <L>
//! max_hidden <m>
//! hidden <count>
//! node <j> <i>:<w> <i>:<w> ...          (one line per hidden node)
//! output <l> <bias> <j>:<beta> ...      (L - 1 lines)
//! ```
//!
//! Weights are written with 17 significant digits, which reads back to the
//! identical `f64`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use punn_core::{HiddenNode, OutputNode, PunnNetwork};

use crate::error::{Error, Result};

const MAGIC: &str = "punn-model";
const VERSION: u32 = 1;

/// A trained network and the node limit it was evolved under.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub network: PunnNetwork,
    pub max_hidden: usize,
}

fn number(x: f64) -> String {
    format!("{x:.16e}")
}

impl Model {
    pub fn new(network: PunnNetwork, max_hidden: usize) -> Self {
        Model {
            network,
            max_hidden,
        }
    }

    pub fn to_text(&self) -> String {
        let net = &self.network;
        let mut s = String::new();
        let _ = writeln!(s, "{MAGIC} {VERSION}");
        let _ = writeln!(s, "inputs {}", net.input_count());
        let _ = writeln!(s, "classes {}", net.class_count());
        let _ = writeln!(s, "max_hidden {}", self.max_hidden);
        let _ = writeln!(s, "hidden {}", net.hidden_count());
        for (j, node) in net.hidden().iter().enumerate() {
            let _ = write!(s, "node {j}");
            for (i, w) in node.exponents().iter().enumerate() {
                if let Some(w) = w {
                    let _ = write!(s, " {i}:{}", number(*w));
                }
            }
            s.push('\n');
        }
        for (l, out) in net.outputs().iter().enumerate() {
            let _ = write!(s, "output {l} {}", number(out.bias()));
            for (j, beta) in out.coefficients().iter().enumerate() {
                if let Some(beta) = beta {
                    let _ = write!(s, " {j}:{}", number(*beta));
                }
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| Error::parse(0, format!("unexpected end of model, expected {what}")))
        };

        let (n, header) = next("header")?;
        if header != format!("{MAGIC} {VERSION}") {
            return Err(Error::parse(n, "not a version 1 model file"));
        }
        let k = keyed(next("inputs")?, "inputs")?;
        let classes = keyed(next("classes")?, "classes")?;
        let max_hidden = keyed(next("max_hidden")?, "max_hidden")?;
        let m = keyed(next("hidden")?, "hidden")?;
        if classes < 2 {
            return Err(Error::parse(0, "a model needs at least two classes"));
        }

        let mut hidden = Vec::with_capacity(m);
        for j in 0..m {
            let (n, line) = next("node")?;
            let mut fields = line.split_whitespace();
            expect_tag(n, &mut fields, "node", j)?;
            let mut exponents = vec![None; k];
            for field in fields {
                let (i, w) = link(n, field, k)?;
                if exponents[i].replace(w).is_some() {
                    return Err(Error::parse(n, format!("input {i} linked twice")));
                }
            }
            hidden.push(HiddenNode::new(exponents));
        }

        let mut outputs = Vec::with_capacity(classes - 1);
        for l in 0..classes - 1 {
            let (n, line) = next("output")?;
            let mut fields = line.split_whitespace();
            expect_tag(n, &mut fields, "output", l)?;
            let bias = fields
                .next()
                .ok_or_else(|| Error::parse(n, "missing bias"))
                .and_then(|b| parse_f64(n, b))?;
            let mut coefficients = vec![None; m];
            for field in fields {
                let (j, beta) = link(n, field, m)?;
                if coefficients[j].replace(beta).is_some() {
                    return Err(Error::parse(n, format!("hidden node {j} linked twice")));
                }
            }
            outputs.push(OutputNode::new(bias, coefficients));
        }
        if let Some((n, _)) = lines.next() {
            return Err(Error::parse(n, "trailing content"));
        }
        let network = PunnNetwork::new(k, classes, hidden, outputs)?;
        Ok(Model::new(network, max_hidden))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Model::from_text(&text)
    }
}

fn keyed((n, line): (usize, &str), key: &str) -> Result<usize> {
    line.strip_prefix(key)
        .and_then(|rest| rest.trim().parse().ok())
        .ok_or_else(|| Error::parse(n, format!("expected `{key} <count>`")))
}

fn expect_tag<'a>(
    n: usize,
    fields: &mut impl Iterator<Item = &'a str>,
    tag: &str,
    index: usize,
) -> Result<()> {
    let ok = fields.next() == Some(tag) && fields.next() == Some(index.to_string().as_str());
    if ok {
        Ok(())
    } else {
        Err(Error::parse(n, format!("expected `{tag} {index}`")))
    }
}

fn link(n: usize, field: &str, bound: usize) -> Result<(usize, f64)> {
    let (index, value) = field
        .split_once(':')
        .ok_or_else(|| Error::parse(n, format!("expected index:weight, found {field:?}")))?;
    let index: usize = index
        .parse()
        .map_err(|_| Error::parse(n, format!("bad index {index:?}")))?;
    if index >= bound {
        return Err(Error::parse(n, format!("index {index} out of range")));
    }
    Ok((index, parse_f64(n, value)?))
}

fn parse_f64(n: usize, s: &str) -> Result<f64> {
    let x: f64 = s
        .parse()
        .map_err(|_| Error::parse(n, format!("not a number: {s:?}")))?;
    if !x.is_finite() {
        return Err(Error::parse(n, "non-finite weight"));
    }
    Ok(x)
}
