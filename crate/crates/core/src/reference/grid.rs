use std::io::{Read, Write};

use crate::error::{Error, Result};

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let h = (b - a) / (n - 1) as f64;
            let mut v: Vec<f64> = (0..n).map(|i| a + h * i as f64).collect();
            v[n - 1] = b;
            v
        }
    }
}

/// Scalar values on a tensor grid in `x` (and optionally `y`) at an optional
/// time. Values are stored with `x` varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    x: Vec<f64>,
    y: Option<Vec<f64>>,
    t: Option<f64>,
    values: Vec<f64>,
}

fn check_axis(name: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::Grid(format!("{name} axis is empty")));
    }
    if v.iter().any(|a| !a.is_finite()) || v.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Grid(format!(
            "{name} axis must be finite and strictly increasing"
        )));
    }
    Ok(())
}

fn check_axes(x: &[f64], y: Option<&[f64]>, t: Option<f64>) -> Result<usize> {
    check_axis("x", x)?;
    if let Some(y) = y {
        check_axis("y", y)?;
    }
    if t.is_some_and(|t| !t.is_finite()) {
        return Err(Error::Grid("time stamp must be finite".into()));
    }
    Ok(x.len() * y.map_or(1, <[f64]>::len))
}

impl GridField {
    pub fn new(x: Vec<f64>, y: Option<Vec<f64>>, t: Option<f64>, values: Vec<f64>) -> Result<Self> {
        let n = check_axes(&x, y.as_deref(), t)?;
        if values.len() != n {
            return Err(Error::Grid(format!(
                "{} values for {n} grid points",
                values.len()
            )));
        }
        Ok(Self { x, y, t, values })
    }

    /// Evaluates `f` at every grid point. The closure receives the point's
    /// coordinates in `x, y, t` order, omitting absent ones.
    pub fn try_from_fn(
        x: Vec<f64>,
        y: Option<Vec<f64>>,
        t: Option<f64>,
        mut f: impl FnMut(&[f64]) -> Result<f64>,
    ) -> Result<Self> {
        let n = check_axes(&x, y.as_deref(), t)?;
        let mut values = Vec::with_capacity(n);
        let mut p = Vec::with_capacity(3);
        for iy in 0..y.as_ref().map_or(1, Vec::len) {
            for &xi in &x {
                p.clear();
                p.push(xi);
                if let Some(y) = &y {
                    p.push(y[iy]);
                }
                p.extend(t);
                values.push(f(&p)?);
            }
        }
        Ok(Self { x, y, t, values })
    }

    pub fn from_fn(
        x: Vec<f64>,
        y: Option<Vec<f64>>,
        t: Option<f64>,
        mut f: impl FnMut(&[f64]) -> f64,
    ) -> Result<Self> {
        Self::try_from_fn(x, y, t, |p| Ok(f(p)))
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> Option<&[f64]> {
        self.y.as_deref()
    }

    pub fn t(&self) -> Option<f64> {
        self.t
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn nx(&self) -> usize {
        self.x.len()
    }

    pub fn ny(&self) -> usize {
        self.y.as_ref().map_or(1, Vec::len)
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx() + ix]
    }

    /// Coordinates of the `i`-th stored value in `x, y, t` order.
    pub fn point(&self, i: usize) -> Vec<f64> {
        let (ix, iy) = (i % self.nx(), i / self.nx());
        let mut p = vec![self.x[ix]];
        if let Some(y) = &self.y {
            p.push(y[iy]);
        }
        p.extend(self.t);
        p
    }

    pub fn same_grid(&self, other: &GridField) -> bool {
        self.x == other.x && self.y == other.y && self.t == other.t
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridField {
        GridField {
            values: self.values.iter().map(|&v| f(v)).collect(),
            ..self.clone()
        }
    }

    /// Pointwise `|self - other|` on a shared grid.
    pub fn abs_diff(&self, other: &GridField) -> Result<GridField> {
        if !self.same_grid(other) {
            return Err(Error::Grid("fields live on different grids".into()));
        }
        Ok(GridField {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| (a - b).abs())
                .collect(),
            ..self.clone()
        })
    }

    /// The row at `y = at`, which must be a grid ordinate.
    pub fn row_at(&self, at: f64) -> Result<GridField> {
        let y = self
            .y
            .as_ref()
            .ok_or_else(|| Error::Grid("field has no y axis".into()))?;
        let iy = y
            .iter()
            .position(|&v| (v - at).abs() <= 1e-12)
            .ok_or_else(|| Error::Grid(format!("y = {at} is not a grid ordinate")))?;
        let n = self.nx();
        GridField::new(
            self.x.clone(),
            None,
            self.t,
            self.values[iy * n..(iy + 1) * n].to_vec(),
        )
    }

    /// Piecewise-linear resampling of a 1-D field onto `xs`, holding the end
    /// values outside the stored range.
    pub fn resample_x(&self, xs: Vec<f64>) -> Result<GridField> {
        if self.y.is_some() {
            return Err(Error::Grid("resampling needs a 1-D field".into()));
        }
        let x = &self.x;
        let v = &self.values;
        let mut out = Vec::with_capacity(xs.len());
        for &q in &xs {
            let j = x.partition_point(|&a| a <= q);
            out.push(if j == 0 {
                v[0]
            } else if j == x.len() {
                v[x.len() - 1]
            } else {
                let w = (q - x[j - 1]) / (x[j] - x[j - 1]);
                v[j - 1] + w * (v[j] - v[j - 1])
            });
        }
        GridField::new(xs, None, self.t, out)
    }

    /// Header `x,y,t,value` with absent coordinates omitted.
    pub fn header(&self) -> Vec<&'static str> {
        let mut h = vec!["x"];
        if self.y.is_some() {
            h.push("y");
        }
        if self.t.is_some() {
            h.push("t");
        }
        h.push("value");
        h
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_fields(w, std::slice::from_ref(self))
    }

    pub fn read_csv<R: Read>(r: R) -> Result<GridField> {
        let mut rdr = csv::Reader::from_reader(r);
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        let h: Vec<&str> = header.iter().map(String::as_str).collect();
        let (has_y, has_t) = match h.as_slice() {
            ["x", "value"] => (false, false),
            ["x", "t", "value"] => (false, true),
            ["x", "y", "value"] => (true, false),
            ["x", "y", "t", "value"] => (true, true),
            _ => return Err(Error::Grid(format!("unexpected header {}", header.join(",")))),
        };
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let nums = rec
                .iter()
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<f64>, _>>()
                .map_err(|e| Error::Grid(format!("bad number: {e}")))?;
            rows.push(nums);
        }
        if rows.is_empty() {
            return Err(Error::Grid("no data rows".into()));
        }
        let nx = if has_y {
            rows.iter().take_while(|r| r[1] == rows[0][1]).count()
        } else {
            rows.len()
        };
        let x: Vec<f64> = rows[..nx].iter().map(|r| r[0]).collect();
        let y = has_y.then(|| rows.iter().step_by(nx).map(|r| r[1]).collect::<Vec<f64>>());
        let t = has_t.then(|| rows[0][h.len() - 2]);
        let values: Vec<f64> = rows.iter().map(|r| r[h.len() - 1]).collect();
        let field = GridField::new(x, y, t, values)?;
        for (i, r) in rows.iter().enumerate() {
            if field.point(i) != r[..h.len() - 1] {
                return Err(Error::Grid(format!("row {} breaks the grid layout", i + 1)));
            }
        }
        Ok(field)
    }
}

/// Writes several fields on the same layout under one header, one block of
/// rows per field (for example one per time slice).
pub fn write_fields<W: Write>(w: W, fields: &[GridField]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let header = fields.first().map(GridField::header).unwrap_or_default();
    out.write_record(&header)?;
    for f in fields {
        if f.header() != header {
            return Err(Error::Grid("fields with different layouts in one file".into()));
        }
        for (i, v) in f.values.iter().enumerate() {
            let mut rec: Vec<String> = f.point(i).iter().map(f64::to_string).collect();
            rec.push(v.to_string());
            out.write_record(&rec)?;
        }
    }
    out.flush()?;
    Ok(())
}
