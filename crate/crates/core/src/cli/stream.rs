//! Line-oriented stream files.
//!
//! ```text
//! # comment
//! e 0 5        edge insert
//! a 17         insert into set A
//! b 17         insert into set B
//! r 42         element insert
//! d 42         element delete (sampler streams only)
//! c 6 0 3      constraint: table, then the scope variables
//! c 91         constraint given by its universe index (needs n, k, q)
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::universe::{Constraint, CspInstance, CspShape, Graph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Record {
    Edge(u64, u64),
    A(u64),
    B(u64),
    Element(u64),
    Delete(u64),
    /// Table and scope.
    Constraint(u64, Vec<u64>),
    /// Constraint by universe index.
    EncodedConstraint(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StreamFile {
    pub records: Vec<Record>,
}

fn parse_int(tok: &str, line: usize) -> Result<u64> {
    let parsed = match tok.strip_prefix("0x") {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => tok.parse(),
    };
    parsed.map_err(|_| Error::Parse {
        line,
        message: format!("expected a nonnegative integer, found {tok:?}"),
    })
}

impl StreamFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut records = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let mut toks = body.split_whitespace();
            let tag = toks.next().expect("nonempty line");
            let nums: Vec<u64> = toks.map(|t| parse_int(t, line)).collect::<Result<_>>()?;
            let arity = |want: usize| -> Result<()> {
                if nums.len() != want {
                    return Err(Error::Parse {
                        line,
                        message: format!(
                            "record {tag:?} takes {want} field(s), found {}",
                            nums.len()
                        ),
                    });
                }
                Ok(())
            };
            let record = match tag {
                "e" => {
                    arity(2)?;
                    Record::Edge(nums[0], nums[1])
                }
                "a" => {
                    arity(1)?;
                    Record::A(nums[0])
                }
                "b" => {
                    arity(1)?;
                    Record::B(nums[0])
                }
                "r" => {
                    arity(1)?;
                    Record::Element(nums[0])
                }
                "d" => {
                    arity(1)?;
                    Record::Delete(nums[0])
                }
                "c" if nums.len() == 1 => Record::EncodedConstraint(nums[0]),
                "c" if nums.len() >= 2 => Record::Constraint(nums[0], nums[1..].to_vec()),
                "c" => {
                    return Err(Error::Parse {
                        line,
                        message: "constraint record needs a table or an index".into(),
                    })
                }
                other => {
                    return Err(Error::Parse {
                        line,
                        message: format!("unknown record tag {other:?}"),
                    })
                }
            };
            records.push(record);
        }
        Ok(StreamFile { records })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let _ = match r {
                Record::Edge(u, v) => writeln!(out, "e {u} {v}"),
                Record::A(x) => writeln!(out, "a {x}"),
                Record::B(x) => writeln!(out, "b {x}"),
                Record::Element(x) => writeln!(out, "r {x}"),
                Record::Delete(x) => writeln!(out, "d {x}"),
                Record::EncodedConstraint(x) => writeln!(out, "c {x}"),
                Record::Constraint(table, vars) => {
                    let vars: Vec<String> = vars.iter().map(u64::to_string).collect();
                    writeln!(out, "c {table} {}", vars.join(" "))
                }
            };
        }
        out
    }

    pub fn from_graph(g: &Graph) -> Result<Self> {
        let records = g
            .edges()
            .iter()
            .map(|&e| {
                let (u, v) = g.universe().decode(e)?;
                Ok(Record::Edge(u as u64, v as u64))
            })
            .collect::<Result<_>>()?;
        Ok(StreamFile { records })
    }

    pub fn from_csp(phi: &CspInstance) -> Self {
        let records = phi
            .constraints()
            .iter()
            .map(|c| Record::Constraint(c.table, c.vars.iter().map(|&v| v as u64).collect()))
            .collect();
        StreamFile { records }
    }

    pub fn from_elements(stream: &[u64]) -> Self {
        StreamFile {
            records: stream.iter().map(|&x| Record::Element(x)).collect(),
        }
    }

    pub fn from_sets(a: &[u64], b: &[u64]) -> Self {
        let records = a
            .iter()
            .map(|&x| Record::A(x))
            .chain(b.iter().map(|&x| Record::B(x)))
            .collect();
        StreamFile { records }
    }

    fn only(&self, what: &str, ok: impl Fn(&Record) -> bool) -> Result<()> {
        match self.records.iter().position(|r| !ok(r)) {
            Some(i) => Err(Error::InvalidInput(format!(
                "record {} ({:?}) does not belong in a {what} stream",
                i + 1,
                self.records[i]
            ))),
            None => Ok(()),
        }
    }

    /// Graph on the edge records. With `n`, ids are used as they are and must
    /// be below `n`; otherwise they are renumbered densely in file order.
    pub fn to_graph(&self, n: Option<usize>) -> Result<Graph> {
        self.only("graph", |r| matches!(r, Record::Edge(..)))?;
        let mut ids = Ids::new(n);
        let mut edges = Vec::with_capacity(self.records.len());
        for r in &self.records {
            if let Record::Edge(u, v) = *r {
                edges.push((ids.map(u)?, ids.map(v)?));
            }
        }
        Graph::from_edges(ids.count(), edges)
    }

    /// CSP instance on the constraint records; variables follow the same
    /// renumbering rule as [`StreamFile::to_graph`].
    pub fn to_csp(&self, n: Option<usize>, k: usize, q: usize) -> Result<CspInstance> {
        self.only("constraint", |r| {
            matches!(r, Record::Constraint(..) | Record::EncodedConstraint(_))
        })?;
        let mut ids = Ids::new(n);
        let mut raw = Vec::new();
        for r in &self.records {
            match r {
                Record::Constraint(table, vars) => {
                    let vars = vars
                        .iter()
                        .map(|&v| ids.map(v))
                        .collect::<Result<Vec<_>>>()?;
                    raw.push(Constraint::new(vars, *table));
                }
                Record::EncodedConstraint(index) => {
                    let n = n.ok_or_else(|| {
                        Error::param("n", "encoded constraint records need the variable count")
                    })?;
                    raw.push(CspShape::new(n, k, q)?.decode(*index)?);
                }
                _ => unreachable!(),
            }
        }
        let shape = CspShape::new(ids.count(), k, q)?;
        CspInstance::new(shape, raw)
    }

    /// Element stream with its universe size; inserts are `+1`, deletes `-1`.
    pub fn to_elements(&self, n: Option<u64>) -> Result<(Vec<(u64, bool)>, u64)> {
        self.only("element", |r| {
            matches!(r, Record::Element(_) | Record::Delete(_))
        })?;
        let mut ids = Ids::new(n.map(|n| n as usize));
        let mut out = Vec::with_capacity(self.records.len());
        for r in &self.records {
            match *r {
                Record::Element(x) => out.push((ids.map(x)? as u64, true)),
                Record::Delete(x) => out.push((ids.map(x)? as u64, false)),
                _ => unreachable!(),
            }
        }
        Ok((out, ids.count() as u64))
    }

    /// Sets `A` and `B` with their common universe size.
    pub fn to_sets(&self, n: Option<u64>) -> Result<(Vec<u64>, Vec<u64>, u64)> {
        self.only("similarity", |r| matches!(r, Record::A(_) | Record::B(_)))?;
        let mut ids = Ids::new(n.map(|n| n as usize));
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for r in &self.records {
            match *r {
                Record::A(x) => a.push(ids.map(x)? as u64),
                Record::B(x) => b.push(ids.map(x)? as u64),
                _ => unreachable!(),
            }
        }
        Ok((a, b, ids.count() as u64))
    }
}

/// Id renumbering: identity below a fixed bound, or dense in first-seen order.
struct Ids {
    bound: Option<usize>,
    seen: HashMap<u64, usize>,
}

impl Ids {
    fn new(bound: Option<usize>) -> Self {
        Ids {
            bound,
            seen: HashMap::new(),
        }
    }

    fn map(&mut self, id: u64) -> Result<usize> {
        match self.bound {
            Some(n) if id >= n as u64 => Err(Error::OutOfUniverse {
                element: id,
                size: n as u64,
            }),
            Some(_) => Ok(id as usize),
            None => {
                let next = self.seen.len();
                Ok(*self.seen.entry(id).or_insert(next))
            }
        }
    }

    fn count(&self) -> usize {
        self.bound.unwrap_or(self.seen.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let text = "# header\ne 0 5\n\ne 5 9  # trailing\n";
        let f = StreamFile::parse(text).unwrap();
        assert_eq!(f.records, vec![Record::Edge(0, 5), Record::Edge(5, 9)]);
        assert_eq!(f.to_text(), "e 0 5\ne 5 9\n");
        let g = f.to_graph(None).unwrap();
        assert_eq!(g.n(), 3);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2));
        assert!(f.to_graph(Some(6)).is_err());
        assert_eq!(f.to_graph(Some(10)).unwrap().n(), 10);
    }

    #[test]
    fn parse_errors_carry_lines() {
        match StreamFile::parse("e 1 2\ne 1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            StreamFile::parse("x 1"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            StreamFile::parse("e -1 2"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn mixed_records_are_rejected() {
        let f = StreamFile::parse("e 0 1\na 3\n").unwrap();
        assert!(f.to_graph(None).is_err());
    }

    #[test]
    fn constraints_round_trip() {
        let f = StreamFile::parse("c 6 0 1\nc 0x8 1 2\n").unwrap();
        let phi = f.to_csp(None, 2, 2).unwrap();
        assert_eq!(phi.constraints().len(), 2);
        assert_eq!(StreamFile::from_csp(&phi).to_text(), "c 6 0 1\nc 8 1 2\n");
    }
}
