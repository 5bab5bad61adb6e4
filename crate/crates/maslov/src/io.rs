//! JSON document formats for paths, units, and lifted-point configurations.
//!
//! Documents are UTF-8 JSON with `schema_version: 1`. Unknown fields are
//! rejected everywhere (typos in hand-written test vectors should fail
//! loudly, not parse as something else). Complex matrices are row-major
//! arrays of `[re, im]` pairs; real matrices (orthogonal frames, skew
//! generators) are row-major arrays of plain numbers; angles are radians.
//! The base unit defaults to the identity when omitted.
//!
//! A path document looks like
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "n": 1,
//!   "kind": "frame_diagonal",
//!   "payload": {
//!     "frame": [[1.0]],
//!     "polylines": [{ "ts": [0.0, 1.0], "values": [0.0, 3.14159] }]
//!   },
//!   "metadata": "half turn on the circle"
//! }
//! ```
//!
//! with `kind` one of `sampled`, `frame_diagonal`, `frame_rotation`, or
//! `concat` (whose payload nests `{kind, payload}` pieces sharing the outer
//! dimension). Unit documents carry a single complex matrix, and formula-E
//! documents carry two lifted points (matrix + real lift) plus the unit the
//! index is taken against.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::calculus::LiftedPoint;
use crate::cmat::{CMat, RMat, SymUnitary, C64};
use crate::error::{Error, Result};
use crate::path::{concatenate, PathKind, Polyline, TripotentPath};

/// The only schema version this build reads and writes.
pub const SCHEMA_VERSION: u32 = 1;

/// Row-major complex matrix data: entries as `[re, im]`.
pub type ComplexRows = Vec<Vec<[f64; 2]>>;

/// Row-major real matrix data.
pub type RealRows = Vec<Vec<f64>>;

/// On-disk form of a path.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathDocument {
    pub schema_version: u32,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<ComplexRows>,
    pub kind: String,
    pub payload: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metadata: Option<String>,
}

/// On-disk form of a single unit (base points, spectrum/pair operands).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitDocument {
    pub schema_version: u32,
    pub n: usize,
    pub matrix: ComplexRows,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metadata: Option<String>,
}

/// A point of the universal cover: a unit together with a real lift of
/// arg det(x·conj(e_ref)).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftedPointDoc {
    pub matrix: ComplexRows,
    pub lift: f64,
}

/// On-disk configuration for the two-point index relation: lifted σ̃ and τ̃,
/// the unit `e` the index is taken against, and the cover base the lifts
/// refer to. Both optional units default to the identity.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormulaEDocument {
    pub schema_version: u32,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<ComplexRows>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover_base: Option<ComplexRows>,
    pub sigma: LiftedPointDoc,
    pub tau: LiftedPointDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metadata: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SampledPayload {
    params: Vec<f64>,
    samples: Vec<ComplexRows>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolylineDoc {
    ts: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameDiagonalPayload {
    frame: RealRows,
    polylines: Vec<PolylineDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameRotationPayload {
    generator: RealRows,
    start: ComplexRows,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PieceDoc {
    kind: String,
    payload: Value,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConcatPayload {
    pieces: Vec<PieceDoc>,
}

fn document_err(context: &str, err: impl std::fmt::Display) -> Error {
    Error::Document(format!("{context}: {err}"))
}

fn check_version(v: u32) -> Result<()> {
    if v != SCHEMA_VERSION {
        return Err(Error::BadSchema(v));
    }
    Ok(())
}

fn decode_complex(field: &str, rows: &ComplexRows, n: usize) -> Result<CMat> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        let found_cols = rows.iter().map(Vec::len).max().unwrap_or(0);
        return Err(Error::Document(format!(
            "field '{field}': expected a {n}x{n} matrix, found {}x{found_cols}",
            rows.len()
        )));
    }
    Ok(CMat::from_fn(n, n, |r, c| {
        C64::new(rows[r][c][0], rows[r][c][1])
    }))
}

fn decode_real(field: &str, rows: &RealRows, n: usize) -> Result<RMat> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        let found_cols = rows.iter().map(Vec::len).max().unwrap_or(0);
        return Err(Error::Document(format!(
            "field '{field}': expected a {n}x{n} matrix, found {}x{found_cols}",
            rows.len()
        )));
    }
    Ok(RMat::from_fn(n, n, |r, c| rows[r][c]))
}

fn encode_complex(m: &CMat) -> ComplexRows {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

fn encode_real(m: &RMat) -> RealRows {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect())
        .collect()
}

fn decode_unit(field: &str, rows: &ComplexRows, n: usize) -> Result<SymUnitary> {
    SymUnitary::new(decode_complex(field, rows, n)?)
}

fn build_kind(n: usize, kind: &str, payload: &Value) -> Result<TripotentPath> {
    match kind {
        "sampled" => {
            let p: SampledPayload = serde_json::from_value(payload.clone())
                .map_err(|e| document_err("payload (sampled)", e))?;
            let samples = p
                .samples
                .iter()
                .enumerate()
                .map(|(i, rows)| decode_unit(&format!("samples[{i}]"), rows, n))
                .collect::<Result<Vec<_>>>()?;
            TripotentPath::sampled(p.params, samples)
        }
        "frame_diagonal" => {
            let p: FrameDiagonalPayload = serde_json::from_value(payload.clone())
                .map_err(|e| document_err("payload (frame_diagonal)", e))?;
            let frame = decode_real("frame", &p.frame, n)?;
            let polylines = p
                .polylines
                .into_iter()
                .map(|d| Polyline::new(d.ts, d.values))
                .collect::<Result<Vec<_>>>()?;
            TripotentPath::frame_diagonal(frame, polylines)
        }
        "frame_rotation" => {
            let p: FrameRotationPayload = serde_json::from_value(payload.clone())
                .map_err(|e| document_err("payload (frame_rotation)", e))?;
            let generator = decode_real("generator", &p.generator, n)?;
            let start = decode_unit("start", &p.start, n)?;
            TripotentPath::frame_rotation(generator, start)
        }
        "concat" => {
            let p: ConcatPayload = serde_json::from_value(payload.clone())
                .map_err(|e| document_err("payload (concat)", e))?;
            let mut built = p
                .pieces
                .iter()
                .map(|piece| build_kind(n, &piece.kind, &piece.payload))
                .collect::<Result<Vec<_>>>()?
                .into_iter();
            let first = built
                .next()
                .ok_or_else(|| Error::Document("field 'pieces': empty concatenation".into()))?;
            built.try_fold(first, |acc, next| concatenate(&acc, &next))
        }
        other => Err(Error::Document(format!(
            "field 'kind': unknown path kind '{other}' \
             (expected sampled, frame_diagonal, frame_rotation, or concat)"
        ))),
    }
}

/// Parse a path document. A `base` field, if present, is attached as the
/// path's base hint.
pub fn parse_path(text: &str) -> Result<TripotentPath> {
    let doc: PathDocument =
        serde_json::from_str(text).map_err(|e| document_err("path document", e))?;
    check_version(doc.schema_version)?;
    let mut path = build_kind(doc.n, &doc.kind, &doc.payload)?;
    if let Some(rows) = &doc.base {
        path = path.with_base_hint(decode_unit("base", rows, doc.n)?);
    }
    Ok(path)
}

/// Parse a unit document.
pub fn parse_unit(text: &str) -> Result<SymUnitary> {
    let doc: UnitDocument =
        serde_json::from_str(text).map_err(|e| document_err("unit document", e))?;
    check_version(doc.schema_version)?;
    decode_unit("matrix", &doc.matrix, doc.n)
}

/// Parse a formula-E configuration into (σ̃, τ̃, e). Lift consistency against
/// the cover base is validated by the [`LiftedPoint`] constructor.
pub fn parse_formula_e(text: &str) -> Result<(LiftedPoint, LiftedPoint, SymUnitary)> {
    let doc: FormulaEDocument =
        serde_json::from_str(text).map_err(|e| document_err("formula-E document", e))?;
    check_version(doc.schema_version)?;
    let n = doc.n;
    let e = match &doc.e {
        Some(rows) => decode_unit("e", rows, n)?,
        None => SymUnitary::identity(n),
    };
    let cover = match &doc.cover_base {
        Some(rows) => decode_unit("cover_base", rows, n)?,
        None => SymUnitary::identity(n),
    };
    let sigma = LiftedPoint::new(
        decode_unit("sigma.matrix", &doc.sigma.matrix, n)?,
        doc.sigma.lift,
        cover.clone(),
    )?;
    let tau = LiftedPoint::new(
        decode_unit("tau.matrix", &doc.tau.matrix, n)?,
        doc.tau.lift,
        cover,
    )?;
    Ok((sigma, tau, e))
}

fn kind_payload(path: &TripotentPath) -> (String, Value) {
    match &path.kind {
        PathKind::Sampled { params, samples } => (
            "sampled".into(),
            serde_json::to_value(SampledPayload {
                params: params.clone(),
                samples: samples.iter().map(|s| encode_complex(s.matrix())).collect(),
            })
            .expect("plain data serializes"),
        ),
        PathKind::FrameDiagonal {
            frame, polylines, ..
        } => (
            "frame_diagonal".into(),
            serde_json::to_value(FrameDiagonalPayload {
                frame: encode_real(frame),
                polylines: polylines
                    .iter()
                    .map(|p| PolylineDoc {
                        ts: p.breakpoints().to_vec(),
                        values: p.values().to_vec(),
                    })
                    .collect(),
            })
            .expect("plain data serializes"),
        ),
        PathKind::FrameRotation {
            generator, start, ..
        } => (
            "frame_rotation".into(),
            serde_json::to_value(FrameRotationPayload {
                generator: encode_real(generator),
                start: encode_complex(start.matrix()),
            })
            .expect("plain data serializes"),
        ),
        PathKind::Concat { pieces } => (
            "concat".into(),
            serde_json::to_value(ConcatPayload {
                pieces: pieces
                    .iter()
                    .map(|p| {
                        let (kind, payload) = kind_payload(p);
                        PieceDoc { kind, payload }
                    })
                    .collect(),
            })
            .expect("plain data serializes"),
        ),
    }
}

/// Serialize a path (and its base hint, if any) back into a document.
pub fn path_document(path: &TripotentPath, metadata: Option<String>) -> PathDocument {
    let (kind, payload) = kind_payload(path);
    PathDocument {
        schema_version: SCHEMA_VERSION,
        n: path.n(),
        base: path.base_hint().map(|e| encode_complex(e.matrix())),
        kind,
        payload,
        metadata,
    }
}

/// Serialize a unit into a document.
pub fn unit_document(x: &SymUnitary, metadata: Option<String>) -> UnitDocument {
    UnitDocument {
        schema_version: SCHEMA_VERSION,
        n: x.n(),
        matrix: encode_complex(x.matrix()),
        metadata,
    }
}

/// Serialize a formula-E configuration into a document.
pub fn formula_e_document(
    sigma: &LiftedPoint,
    tau: &LiftedPoint,
    e: &SymUnitary,
    metadata: Option<String>,
) -> FormulaEDocument {
    FormulaEDocument {
        schema_version: SCHEMA_VERSION,
        n: e.n(),
        e: Some(encode_complex(e.matrix())),
        cover_base: Some(encode_complex(sigma.e_ref().matrix())),
        sigma: LiftedPointDoc {
            matrix: encode_complex(sigma.x().matrix()),
            lift: sigma.lift(),
        },
        tau: LiftedPointDoc {
            matrix: encode_complex(tau.x().matrix()),
            lift: tau.lift(),
        },
        metadata,
    }
}

/// Pretty-print any document.
pub fn to_json_string<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("plain data serializes")
}
