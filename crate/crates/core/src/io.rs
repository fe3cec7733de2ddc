//! JSON and CSV formats used by the command-line tool.
//!
//! Numbers are written with 17 significant digits so every f64 survives a
//! write/read cycle bit for bit. Objects are emitted in struct field order.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::ser::Serialize;
use serde::{Deserialize, Serialize as SerializeDerive};
use serde_json::ser::Formatter;

use crate::error::{QdsError, Result};
use crate::gksl::{GksForm, Jump, KForm};
use crate::linalg::{ComplexMatrix, C64};
use crate::semigroup::Trajectory;
use crate::superop::SuperOperator;

/// Compact JSON with every float printed as `{:.16e}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactFloatFormatter;

impl Formatter for ExactFloatFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serializes `value` followed by a newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFloatFormatter);
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let n = m.rows();
        let part = |f: fn(&C64) -> f64| (0..n).map(|i| (0..m.cols()).map(|j| f(&m[(i, j)])).collect()).collect();
        Self { n, re: part(|z| z.re), im: part(|z| z.im) }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.n;
        if n == 0 {
            return Err(QdsError::InvalidDimension("matrix with n = 0".into()));
        }
        for (name, part) in [("re", &self.re), ("im", &self.im)] {
            if part.len() != n || part.iter().any(|row| row.len() != n) {
                return Err(QdsError::DimensionMismatch(format!("\"{name}\" is not {n}x{n}")));
            }
        }
        let data = (0..n * n).map(|k| C64::new(self.re[k / n][k % n], self.im[k / n][k % n])).collect();
        ComplexMatrix::from_row_major(n, n, data)
    }
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    #[serde(rename = "X")]
    pub x: MatrixJson,
    #[serde(rename = "Y")]
    pub y: MatrixJson,
}

/// `{"kind":"matrix","n":N,"mat":…}` or `{"kind":"sandwich","n":N,"terms":[{"X":…,"Y":…}]}`;
/// a sandwich file describes A ↦ ∑ X A Y.
#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SuperOperatorJson {
    Matrix { n: usize, mat: MatrixJson },
    Sandwich { n: usize, terms: Vec<TermJson> },
}

impl SuperOperatorJson {
    pub fn from_superop(l: &SuperOperator) -> Self {
        SuperOperatorJson::Matrix { n: l.n(), mat: MatrixJson::from_matrix(l.mat()) }
    }

    pub fn to_superop(&self) -> Result<SuperOperator> {
        match self {
            SuperOperatorJson::Matrix { n, mat } => {
                if *n == 0 {
                    return Err(QdsError::InvalidDimension("superoperator with n = 0".into()));
                }
                if mat.n != n * n {
                    return Err(QdsError::DimensionMismatch(format!("mat has n = {}, expected {}", mat.n, n * n)));
                }
                SuperOperator::new(*n, mat.to_matrix()?)
            }
            SuperOperatorJson::Sandwich { n, terms } => {
                if *n == 0 {
                    return Err(QdsError::InvalidDimension("superoperator with n = 0".into()));
                }
                let pairs = terms
                    .iter()
                    .map(|t| Ok((t.x.to_matrix()?, t.y.to_matrix()?)))
                    .collect::<Result<Vec<_>>>()?;
                SuperOperator::from_sandwich_terms(*n, &pairs)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JumpJson {
    pub rate: f64,
    #[serde(rename = "G")]
    pub g: MatrixJson,
}

/// GKSL form `{"n","H","jumps"}`; a K-form adds `"K"` and `"trace_defect"`.
#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GksFormJson {
    pub n: usize,
    #[serde(rename = "H")]
    pub h: MatrixJson,
    pub jumps: Vec<JumpJson>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_defect: Option<f64>,
}

fn jumps_to_json(jumps: &[Jump]) -> Vec<JumpJson> {
    jumps.iter().map(|j| JumpJson { rate: j.rate, g: MatrixJson::from_matrix(&j.op) }).collect()
}

fn jumps_from_json(n: usize, jumps: &[JumpJson]) -> Result<Vec<Jump>> {
    jumps
        .iter()
        .map(|j| {
            let op = j.g.to_matrix()?;
            if op.rows() != n {
                return Err(QdsError::DimensionMismatch(format!("jump operator is {0}x{0}, form has n = {n}", op.rows())));
            }
            Ok(Jump { rate: j.rate, op })
        })
        .collect()
}

/// A decoded form file: GKSL unless `K` was present.
#[derive(Debug, Clone, PartialEq)]
pub enum DecodedForm {
    Gksl(GksForm),
    K(KForm),
}

impl GksFormJson {
    pub fn from_gksl(form: &GksForm) -> Self {
        Self { n: form.n, h: MatrixJson::from_matrix(&form.hamiltonian), jumps: jumps_to_json(&form.jumps), k: None, trace_defect: None }
    }

    /// K-form files carry a zero `H` so they stay readable as GKSL files.
    pub fn from_k_form(form: &KForm) -> Self {
        Self {
            n: form.n,
            h: MatrixJson::from_matrix(&ComplexMatrix::zeros(form.n, form.n)),
            jumps: jumps_to_json(&form.jumps),
            k: Some(MatrixJson::from_matrix(&form.k)),
            trace_defect: Some(form.trace_defect),
        }
    }

    pub fn decode(&self) -> Result<DecodedForm> {
        let n = self.n;
        if n == 0 {
            return Err(QdsError::InvalidDimension("form with n = 0".into()));
        }
        let jumps = jumps_from_json(n, &self.jumps)?;
        let check_n = |m: &ComplexMatrix, what: &str| {
            if m.rows() != n {
                return Err(QdsError::DimensionMismatch(format!("{what} is {0}x{0}, form has n = {n}", m.rows())));
            }
            Ok(())
        };
        let hamiltonian = self.h.to_matrix()?;
        check_n(&hamiltonian, "H")?;
        match &self.k {
            Some(k) => {
                let k = k.to_matrix()?;
                check_n(&k, "K")?;
                let trace_defect = self.trace_defect.unwrap_or_else(|| 2.0 * k.trace().re);
                Ok(DecodedForm::K(KForm { n, k, jumps, trace_defect }))
            }
            None => Ok(DecodedForm::Gksl(GksForm { n, hamiltonian, jumps })),
        }
    }
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct CertificateJson {
    pub pass: bool,
    /// `null` when the check does not apply to the map.
    pub worst_value: Option<f64>,
}

/// Classification report; certificates are keyed by check name in
/// alphabetical order.
#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct ReportJson {
    pub verdict: String,
    pub hermiticity_preserving: bool,
    pub trace_annihilating: bool,
    pub rates_nonnegative: bool,
    pub rates: Vec<f64>,
    pub certificates: BTreeMap<String, CertificateJson>,
}

/// `t,re_1_1,im_1_1,re_1_2,…` header: 1-based (row, column) indices in
/// row-major order, real and imaginary parts interleaved.
pub fn trajectory_csv_header(n: usize) -> String {
    let mut cols = vec!["t".to_string()];
    for i in 1..=n {
        for j in 1..=n {
            cols.push(format!("re_{i}_{j}"));
            cols.push(format!("im_{i}_{j}"));
        }
    }
    cols.join(",")
}

pub fn trajectory_to_csv(traj: &Trajectory, n: usize) -> String {
    let mut out = trajectory_csv_header(n);
    out.push('\n');
    for (t, state) in traj.times.iter().zip(&traj.states) {
        let mut fields = vec![format!("{t:.16e}")];
        for z in state.as_slice() {
            fields.push(format!("{:.16e}", z.re));
            fields.push(format!("{:.16e}", z.im));
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gksl::dephasing;

    #[test]
    fn floats_round_trip_exactly() {
        let m = ComplexMatrix::from_fn(2, 2, |i, j| C64::new(0.1 + i as f64 / 3.0, -1e-300 * j as f64 + 1.0 / 7.0));
        let text = to_json_string(&MatrixJson::from_matrix(&m));
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_matrix().unwrap(), m);
        assert!(text.contains("1.0000000000000001e-1"));
        assert!(text.ends_with("}\n"));
    }

    #[test]
    fn superop_json_shapes() {
        let text = to_json_string(&SuperOperatorJson::from_superop(&dephasing(2.0)));
        assert!(text.starts_with("{\"kind\":\"matrix\",\"n\":2,\"mat\":{\"n\":4,"));
        let parsed: SuperOperatorJson = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.to_superop().unwrap(), dephasing(2.0));

        let bad = SuperOperatorJson::Matrix { n: 3, mat: MatrixJson::from_matrix(dephasing(2.0).mat()) };
        assert!(matches!(bad.to_superop(), Err(QdsError::DimensionMismatch(_))));
    }

    #[test]
    fn sandwich_json() {
        let text = r#"{"kind":"sandwich","n":1,"terms":[{"X":{"n":1,"re":[[2]],"im":[[0]]},"Y":{"n":1,"re":[[3]],"im":[[0]]}}]}"#;
        let parsed: SuperOperatorJson = serde_json::from_str(text).unwrap();
        let l = parsed.to_superop().unwrap();
        assert_eq!(l.mat()[(0, 0)], C64::new(6.0, 0.0));
    }

    #[test]
    fn ragged_matrix_is_dimension_error() {
        let m = MatrixJson { n: 2, re: vec![vec![1.0, 0.0], vec![0.0]], im: vec![vec![0.0; 2]; 2] };
        assert!(matches!(m.to_matrix(), Err(QdsError::DimensionMismatch(_))));
    }

    #[test]
    fn csv_layout() {
        assert_eq!(trajectory_csv_header(2), "t,re_1_1,im_1_1,re_1_2,im_1_2,re_2_1,im_2_1,re_2_2,im_2_2");
        let traj = Trajectory { times: vec![0.5], states: vec![ComplexMatrix::from_fn(1, 1, |_, _| C64::new(1.0, -2.0))] };
        assert_eq!(
            trajectory_to_csv(&traj, 1),
            "t,re_1_1,im_1_1\n5.0000000000000000e-1,1.0000000000000000e0,-2.0000000000000000e0\n"
        );
    }
}
