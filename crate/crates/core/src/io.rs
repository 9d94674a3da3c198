//! JSON problem files, result envelopes and CSV generator listings.
//!
//! A problem file is one JSON object with a `kind` tag and dense row-major
//! matrices (lists of rows):
//!
//! ```json
//! { "kind": "lvop", "q": 2, "n": 2, "m": 1,
//!   "C": { "rays": [[1, 0], [0, 1]], "c": [0.6, 0.8] },
//!   "P": [[1, 0], [0, 1]], "A": [[-1, -1]], "b": [0] }
//! ```
//!
//! `sdvp` files carry `k`, `P`, `F` (list of `k x k` matrices) and `G`; `qvp`
//! files carry `objectives` (`{P, d}`), `constraints` (`{Q, c, r}`), `A` and `b`.
//! `c` is optional.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::model::{
    ApproxFlag, ConeApproximation, LinearVop, OrderingCone, Problem, QuadraticConstraint,
    QuadraticObjective, QuadraticVop, SemidefiniteVop,
};

struct Doc<'a> {
    text: &'a str,
}

impl Doc<'_> {
    fn line_of(&self, field: &str) -> usize {
        let key = format!("\"{field}\"");
        self.text
            .lines()
            .position(|l| l.contains(&key))
            .map_or(1, |i| i + 1)
    }

    fn err(&self, field: &str, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line_of(field.rsplit('.').next().unwrap_or(field)),
            field: field.to_string(),
            msg: msg.into(),
        }
    }

    fn get<'v>(&self, obj: &'v Map<String, Value>, path: &str, name: &str) -> Result<&'v Value> {
        obj.get(name)
            .ok_or_else(|| self.err(&join(path, name), "missing field"))
    }

    fn number(&self, v: &Value, field: &str) -> Result<f64> {
        v.as_f64()
            .ok_or_else(|| self.err(field, format!("expected a number, found {v}")))
    }

    fn count(&self, obj: &Map<String, Value>, name: &str) -> Result<usize> {
        let v = self.get(obj, "", name)?;
        v.as_u64()
            .map(|x| x as usize)
            .ok_or_else(|| self.err(name, format!("expected a nonnegative integer, found {v}")))
    }

    fn vector(&self, v: &Value, field: &str, len: usize) -> Result<DVector<f64>> {
        let arr = v
            .as_array()
            .ok_or_else(|| self.err(field, "expected an array of numbers"))?;
        if arr.len() != len {
            return Err(self.err(
                field,
                format!("expected {len} entries, found {}", arr.len()),
            ));
        }
        let xs = arr
            .iter()
            .map(|x| self.number(x, field))
            .collect::<Result<Vec<f64>>>()?;
        Ok(DVector::from_vec(xs))
    }

    fn matrix(&self, v: &Value, field: &str, rows: usize, cols: usize) -> Result<DMatrix<f64>> {
        let arr = v
            .as_array()
            .ok_or_else(|| self.err(field, "expected an array of rows"))?;
        if arr.len() != rows {
            return Err(self.err(field, format!("expected {rows} rows, found {}", arr.len())));
        }
        let mut m = DMatrix::zeros(rows, cols);
        for (i, row) in arr.iter().enumerate() {
            let r = self.vector(row, &format!("{field}[{i}]"), cols)?;
            m.row_mut(i).copy_from(&r.transpose());
        }
        Ok(m)
    }
}

fn join(path: &str, name: &str) -> String {
    if path.is_empty() {
        name.to_string()
    } else {
        format!("{path}.{name}")
    }
}

fn parse_cone(doc: &Doc, root: &Map<String, Value>, q: usize) -> Result<OrderingCone> {
    let c = doc
        .get(root, "", "C")?
        .as_object()
        .ok_or_else(|| doc.err("C", "expected an object"))?;
    let rays = doc
        .get(c, "C", "rays")?
        .as_array()
        .ok_or_else(|| doc.err("C.rays", "expected an array of rays"))?;
    if rays.is_empty() {
        return Err(doc.err("C.rays", "at least one ray is required"));
    }
    let rays = rays
        .iter()
        .enumerate()
        .map(|(i, r)| doc.vector(r, &format!("C.rays[{i}]"), q))
        .collect::<Result<Vec<_>>>()?;
    let cvec = match c.get("c") {
        None | Some(Value::Null) => None,
        Some(v) => Some(doc.vector(v, "C.c", q)?),
    };
    OrderingCone::new(rays, cvec)
}

/// Parses a problem document. Structural errors carry the line and field.
pub fn parse_problem(text: &str) -> Result<Problem> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        field: String::new(),
        msg: e.to_string(),
    })?;
    let doc = Doc { text };
    let root = value
        .as_object()
        .ok_or_else(|| doc.err("", "top level must be an object"))?;
    let kind = doc
        .get(root, "", "kind")?
        .as_str()
        .ok_or_else(|| doc.err("kind", "expected a string"))?;
    let q = doc.count(root, "q")?;
    let n = doc.count(root, "n")?;
    match kind {
        "lvop" => {
            let m = doc.count(root, "m")?;
            let cone = parse_cone(&doc, root, q)?;
            let p = doc.matrix(doc.get(root, "", "P")?, "P", n, q)?;
            let a = doc.matrix(doc.get(root, "", "A")?, "A", m, n)?;
            let b = doc.vector(doc.get(root, "", "b")?, "b", m)?;
            Ok(Problem::Linear(LinearVop::new(p, a, b, cone)?))
        }
        "sdvp" => {
            let k = doc.count(root, "k")?;
            let cone = parse_cone(&doc, root, q)?;
            let p = doc.matrix(doc.get(root, "", "P")?, "P", n, q)?;
            let fs = doc
                .get(root, "", "F")?
                .as_array()
                .ok_or_else(|| doc.err("F", "expected a list of matrices"))?;
            if fs.len() != n {
                return Err(doc.err("F", format!("expected {n} matrices, found {}", fs.len())));
            }
            let f = fs
                .iter()
                .enumerate()
                .map(|(i, m)| doc.matrix(m, &format!("F[{i}]"), k, k))
                .collect::<Result<Vec<_>>>()?;
            let g = doc.matrix(doc.get(root, "", "G")?, "G", k, k)?;
            Ok(Problem::Semidefinite(SemidefiniteVop::new(p, f, g, cone)?))
        }
        "qvp" => {
            let m = doc.count(root, "m")?;
            let cone = parse_cone(&doc, root, q)?;
            let objs = doc
                .get(root, "", "objectives")?
                .as_array()
                .ok_or_else(|| doc.err("objectives", "expected a list"))?;
            if objs.len() != q {
                return Err(doc.err(
                    "objectives",
                    format!("expected {q} objectives, found {}", objs.len()),
                ));
            }
            let mut objective = Vec::with_capacity(q);
            for (i, o) in objs.iter().enumerate() {
                let path = format!("objectives[{i}]");
                let o = o
                    .as_object()
                    .ok_or_else(|| doc.err(&path, "expected an object"))?;
                objective.push(QuadraticObjective {
                    p: doc.matrix(doc.get(o, &path, "P")?, &join(&path, "P"), n, n)?,
                    d: doc.vector(doc.get(o, &path, "d")?, &join(&path, "d"), n)?,
                });
            }
            let mut constraints = Vec::new();
            if let Some(cs) = root.get("constraints") {
                let cs = cs
                    .as_array()
                    .ok_or_else(|| doc.err("constraints", "expected a list"))?;
                for (j, c) in cs.iter().enumerate() {
                    let path = format!("constraints[{j}]");
                    let c = c
                        .as_object()
                        .ok_or_else(|| doc.err(&path, "expected an object"))?;
                    constraints.push(QuadraticConstraint {
                        q: doc.matrix(doc.get(c, &path, "Q")?, &join(&path, "Q"), n, n)?,
                        c: doc.vector(doc.get(c, &path, "c")?, &join(&path, "c"), n)?,
                        r: doc.number(doc.get(c, &path, "r")?, &join(&path, "r"))?,
                    });
                }
            }
            let a = doc.matrix(doc.get(root, "", "A")?, "A", m, n)?;
            let b = doc.vector(doc.get(root, "", "b")?, "b", m)?;
            Ok(Problem::Quadratic(QuadraticVop::new(
                objective,
                constraints,
                a,
                b,
                cone,
            )?))
        }
        other => Err(doc.err(
            "kind",
            format!("unknown kind `{other}` (expected lvop, sdvp or qvp)"),
        )),
    }
}

pub fn read_problem(path: impl AsRef<Path>) -> Result<Problem> {
    parse_problem(&std::fs::read_to_string(path)?)
}

fn mat(m: &DMatrix<f64>) -> Value {
    Value::Array(
        m.row_iter()
            .map(|r| Value::Array(r.iter().map(|&x| json!(x)).collect()))
            .collect(),
    )
}

fn vecv(v: &DVector<f64>) -> Value {
    Value::Array(v.iter().map(|&x| json!(x)).collect())
}

fn cone_value(c: &OrderingCone) -> Value {
    let mut obj = Map::new();
    obj.insert(
        "rays".into(),
        Value::Array(c.rays_given().iter().map(vecv).collect()),
    );
    if let Some(cv) = c.c_given() {
        obj.insert("c".into(), vecv(cv));
    }
    Value::Object(obj)
}

/// Problem document in the schema accepted by [`parse_problem`].
pub fn problem_to_value(problem: &Problem) -> Value {
    match problem {
        Problem::Linear(p) => json!({
            "kind": "lvop", "q": p.q(), "n": p.n(), "m": p.m(),
            "C": cone_value(&p.cone),
            "P": mat(&p.p), "A": mat(&p.a), "b": vecv(&p.b),
        }),
        Problem::Semidefinite(p) => json!({
            "kind": "sdvp", "q": p.q(), "n": p.n(), "k": p.k(),
            "C": cone_value(&p.cone),
            "P": mat(&p.p),
            "F": Value::Array(p.f.iter().map(mat).collect()),
            "G": mat(&p.g),
        }),
        Problem::Quadratic(p) => json!({
            "kind": "qvp", "q": p.q(), "n": p.n(), "m": p.m(),
            "C": cone_value(&p.cone),
            "objectives": p.objective.iter().map(|o| json!({"P": mat(&o.p), "d": vecv(&o.d)})).collect::<Vec<_>>(),
            "constraints": p.constraints.iter().map(|c| json!({"Q": mat(&c.q), "c": vecv(&c.c), "r": c.r})).collect::<Vec<_>>(),
            "A": mat(&p.a), "b": vecv(&p.b),
        }),
    }
}

pub fn serialize_problem(problem: &Problem) -> String {
    serde_json::to_string_pretty(&problem_to_value(problem)).expect("JSON values always serialize")
}

/// JSON result written by the `recession` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultEnvelope {
    pub kind: String,
    pub q: usize,
    pub delta: f64,
    pub achieved_delta: f64,
    pub exact: bool,
    pub flags: Vec<ApproxFlag>,
    pub inner: Vec<Vec<f64>>,
    pub outer: Vec<Vec<f64>>,
}

impl ResultEnvelope {
    pub fn new(kind: &str, approx: &ConeApproximation) -> Self {
        ResultEnvelope {
            kind: kind.to_string(),
            q: approx.dim,
            delta: approx.delta,
            achieved_delta: approx.achieved_delta,
            exact: approx.exact,
            flags: approx.flags.clone(),
            inner: approx.inner.clone(),
            outer: approx.outer.clone(),
        }
    }

    pub fn approximation(&self) -> ConeApproximation {
        ConeApproximation {
            dim: self.q,
            inner: self.inner.clone(),
            outer: self.outer.clone(),
            delta: self.delta,
            achieved_delta: self.achieved_delta,
            exact: self.exact,
            flags: self.flags.clone(),
        }
    }
}

pub fn parse_envelope(text: &str) -> Result<ResultEnvelope> {
    serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        let field = msg.split('`').nth(1).unwrap_or("").to_string();
        Error::Parse {
            line: e.line(),
            field,
            msg,
        }
    })
}

/// One generator per row: `set,x1,...,xq` with `set` in `{inner, outer}`.
pub fn generators_csv(approx: &ConeApproximation) -> String {
    let mut out = String::from("set");
    for i in 1..=approx.dim {
        out.push_str(&format!(",x{i}"));
    }
    out.push('\n');
    for (tag, rays) in [("inner", &approx.inner), ("outer", &approx.outer)] {
        for r in rays {
            out.push_str(tag);
            for x in r {
                out.push_str(&format!(",{x}"));
            }
            out.push('\n');
        }
    }
    out
}
