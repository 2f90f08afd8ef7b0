//! Plain-text problem dump.
//!
//! ```text
//! sdp 1
//! sense minimize|maximize
//! blocks <n> <d_1> ... <d_n>
//! free <k> <c_1> ... <c_k>
//! objective <block> <nnz>
//! <i> <j> <re> <im>            (nnz lines)
//! constraint eq|le <rhs> <nblocks> <nfree>
//! block <block> <nnz>
//! <i> <j> <re> <im>            (nnz lines)
//! scalar <index> <coef>        (nfree lines)
//! ```
//!
//! Objective sections are listed only for nonzero blocks. Indices are zero
//! based and every real is written with 17 significant digits, so parsing a
//! dump gives back the identical problem.

use std::fmt::Write;

use super::problem::{Constraint, Relation, SdpProblem, Sense};
use super::sparse::SparseHermitian;
use crate::error::{Error, Result};
use crate::qmath::C64;

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_entries(out: &mut String, a: &SparseHermitian) {
    for &(i, j, v) in a.entries() {
        let _ = writeln!(out, "{i} {j} {} {}", real(v.re), real(v.im));
    }
}

pub fn dump_problem(p: &SdpProblem) -> String {
    let mut out = String::from("sdp 1\n");
    let sense = match p.sense {
        Sense::Minimize => "minimize",
        Sense::Maximize => "maximize",
    };
    let _ = writeln!(out, "sense {sense}");
    let dims: Vec<String> = p.block_dims.iter().map(|d| d.to_string()).collect();
    let _ = writeln!(out, "blocks {} {}", p.block_dims.len(), dims.join(" "));
    let free: Vec<String> = p.free_objective.iter().map(|&c| real(c)).collect();
    let _ = writeln!(out, "free {} {}", p.free_scalars, free.join(" "));
    for (b, a) in p.objective.iter().enumerate() {
        if !a.is_zero() {
            let _ = writeln!(out, "objective {b} {}", a.nnz());
            write_entries(&mut out, a);
        }
    }
    for c in &p.constraints {
        let rel = match c.relation {
            Relation::Eq => "eq",
            Relation::Le => "le",
        };
        let _ = writeln!(out, "constraint {rel} {} {} {}", real(c.rhs), c.blocks.len(), c.free.len());
        for (b, a) in &c.blocks {
            let _ = writeln!(out, "block {b} {}", a.nnz());
            write_entries(&mut out, a);
        }
        for &(f, a) in &c.free {
            let _ = writeln!(out, "scalar {f} {}", real(a));
        }
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<Vec<&'a str>> {
        loop {
            let (n, l) = self.inner.next().ok_or_else(|| bad(self.line, "unexpected end of dump"))?;
            self.line = n + 1;
            let l = l.trim();
            if !l.is_empty() {
                return Ok(l.split_whitespace().collect());
            }
        }
    }

    fn peek_done(&mut self) -> Option<Result<Vec<&'a str>>> {
        for (n, l) in self.inner.by_ref() {
            self.line = n + 1;
            let l = l.trim();
            if !l.is_empty() {
                return Some(Ok(l.split_whitespace().collect()));
            }
        }
        None
    }
}

fn bad(line: usize, msg: &str) -> Error {
    Error::InvalidArgument(format!("dump line {line}: {msg}"))
}

fn num<T: std::str::FromStr>(tok: Option<&&str>, line: usize) -> Result<T> {
    tok.and_then(|t| t.parse().ok()).ok_or_else(|| bad(line, "malformed number"))
}

fn keyword(toks: &[&str], kw: &str, line: usize) -> Result<()> {
    if toks.first() == Some(&kw) {
        Ok(())
    } else {
        Err(bad(line, &format!("expected `{kw}`")))
    }
}

fn read_entries(lines: &mut Lines, dim: usize, nnz: usize) -> Result<SparseHermitian> {
    let mut entries = Vec::with_capacity(nnz);
    for _ in 0..nnz {
        let t = lines.next()?;
        let i: usize = num(t.first(), lines.line)?;
        let j: usize = num(t.get(1), lines.line)?;
        if i >= dim || j >= dim {
            return Err(bad(lines.line, "entry outside block"));
        }
        entries.push((i, j, C64::new(num(t.get(2), lines.line)?, num(t.get(3), lines.line)?)));
    }
    Ok(SparseHermitian::from_entries(dim, entries))
}

pub fn parse_problem(text: &str) -> Result<SdpProblem> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        line: 0,
    };
    let t = lines.next()?;
    if t != ["sdp", "1"] {
        return Err(bad(lines.line, "expected header `sdp 1`"));
    }
    let t = lines.next()?;
    keyword(&t, "sense", lines.line)?;
    let sense = match t.get(1) {
        Some(&"minimize") => Sense::Minimize,
        Some(&"maximize") => Sense::Maximize,
        _ => return Err(bad(lines.line, "unknown sense")),
    };
    let t = lines.next()?;
    keyword(&t, "blocks", lines.line)?;
    let n: usize = num(t.get(1), lines.line)?;
    let block_dims = (0..n).map(|i| num(t.get(2 + i), lines.line)).collect::<Result<Vec<usize>>>()?;
    let t = lines.next()?;
    keyword(&t, "free", lines.line)?;
    let k: usize = num(t.get(1), lines.line)?;
    let free_objective = (0..k).map(|i| num(t.get(2 + i), lines.line)).collect::<Result<Vec<f64>>>()?;

    let mut objective: Vec<SparseHermitian> = block_dims.iter().map(|&d| SparseHermitian::zero(d)).collect();
    let mut constraints = Vec::new();
    let dim_of = |b: usize, line: usize| block_dims.get(b).copied().ok_or_else(|| bad(line, "block index out of range"));
    while let Some(t) = lines.peek_done() {
        let t = t?;
        match t.first() {
            Some(&"objective") => {
                let b: usize = num(t.get(1), lines.line)?;
                let nnz: usize = num(t.get(2), lines.line)?;
                let d = dim_of(b, lines.line)?;
                objective[b] = read_entries(&mut lines, d, nnz)?;
            }
            Some(&"constraint") => {
                let relation = match t.get(1) {
                    Some(&"eq") => Relation::Eq,
                    Some(&"le") => Relation::Le,
                    _ => return Err(bad(lines.line, "unknown relation")),
                };
                let rhs: f64 = num(t.get(2), lines.line)?;
                let nb: usize = num(t.get(3), lines.line)?;
                let nf: usize = num(t.get(4), lines.line)?;
                let mut blocks = Vec::with_capacity(nb);
                for _ in 0..nb {
                    let t = lines.next()?;
                    keyword(&t, "block", lines.line)?;
                    let b: usize = num(t.get(1), lines.line)?;
                    let nnz: usize = num(t.get(2), lines.line)?;
                    let d = dim_of(b, lines.line)?;
                    blocks.push((b, read_entries(&mut lines, d, nnz)?));
                }
                let mut free = Vec::with_capacity(nf);
                for _ in 0..nf {
                    let t = lines.next()?;
                    keyword(&t, "scalar", lines.line)?;
                    free.push((num(t.get(1), lines.line)?, num(t.get(2), lines.line)?));
                }
                constraints.push(Constraint {
                    blocks,
                    free,
                    relation,
                    rhs,
                });
            }
            _ => return Err(bad(lines.line, "expected `objective` or `constraint`")),
        }
    }
    let p = SdpProblem {
        sense,
        block_dims,
        objective,
        free_scalars: k,
        free_objective,
        constraints,
    };
    p.validate()?;
    Ok(p)
}
