//! JSON file formats. Every document carries `"format_version": "1"`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coverarith::{AbelianCoverSpec, CoverError, CoverStage};
use crate::exactfield::{CycloField, FieldError};
use crate::gradedgeom::{BaseVariety, GeomError, ProductDecomposition, VarietyKind};
use crate::matfac::{MatfacError, MatrixRoot, PolyMatrix, RootFactors, UlrichCertificate};
use crate::polyring::{PolyError, PolyRing};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format_version {0:?}")]
    Version(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Matfac(#[from] MatfacError),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

fn check_version(v: &Option<String>) -> Result<(), FormatError> {
    match v {
        Some(v) if v != FORMAT_VERSION => Err(FormatError::Version(v.clone())),
        _ => Ok(()),
    }
}

fn version() -> Option<String> {
    Some(FORMAT_VERSION.to_string())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BaseJson {
    pub kind: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub forms: Vec<String>,
}

impl BaseJson {
    pub fn from_variety(v: &BaseVariety) -> Self {
        match v.kind() {
            VarietyKind::ProjectiveSpace => BaseJson { kind: "P".into(), n: v.ambient_dim(), forms: Vec::new() },
            VarietyKind::CompleteIntersection { forms, .. } => BaseJson {
                kind: "CI".into(),
                n: v.ambient_dim(),
                forms: forms.iter().map(ToString::to_string).collect(),
            },
        }
    }

    pub fn to_variety(&self) -> Result<BaseVariety, FormatError> {
        match self.kind.as_str() {
            "P" if self.forms.is_empty() => Ok(BaseVariety::projective_space(self.n)),
            "P" => Err(FormatError::Invalid("kind P takes no forms".into())),
            "CI" => {
                let ring = PolyRing::rational(self.n + 1);
                let forms = self.forms.iter().map(|f| ring.parse(f)).collect::<Result<Vec<_>, _>>()?;
                if forms.is_empty() {
                    return Err(FormatError::Invalid("kind CI needs at least one form".into()));
                }
                Ok(BaseVariety::complete_intersection(self.n, forms)?)
            }
            other => Err(FormatError::Invalid(format!("unknown variety kind {other:?}"))),
        }
    }
}

pub fn parse_base(text: &str) -> Result<BaseVariety, FormatError> {
    serde_json::from_str::<BaseJson>(text)?.to_variety()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompositionJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format_version: Option<String>,
    pub d: u32,
    pub n: u32,
    pub terms: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<BaseJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_order: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_vars: Option<usize>,
}

// Largest `x<i>` index mentioned in the texts, plus one.
fn infer_num_vars<'a>(texts: impl IntoIterator<Item = &'a String>) -> usize {
    let mut max = 0;
    for t in texts {
        let bytes = t.as_bytes();
        for (i, &b) in bytes.iter().enumerate() {
            if b == b'x' {
                let digits: String = t[i + 1..].chars().take_while(char::is_ascii_digit).collect();
                if let Ok(k) = digits.parse::<usize>() {
                    max = max.max(k + 1);
                }
            }
        }
    }
    max.max(1)
}

impl DecompositionJson {
    pub fn from_decomposition(dec: &ProductDecomposition, base: Option<&BaseVariety>) -> Self {
        let ring = dec.ring();
        DecompositionJson {
            format_version: version(),
            d: dec.d,
            n: dec.n,
            terms: dec.terms.iter().map(|t| t.iter().map(ToString::to_string).collect()).collect(),
            base: base.map(BaseJson::from_variety),
            field_order: ring.map(|r| r.field().order()),
            num_vars: ring.map(|r| r.num_vars()).or(base.map(|b| b.num_vars())),
        }
    }

    pub fn to_decomposition(&self) -> Result<(ProductDecomposition, Option<BaseVariety>), FormatError> {
        check_version(&self.format_version)?;
        let base = self.base.as_ref().map(BaseJson::to_variety).transpose()?;
        let num_vars = self
            .num_vars
            .or(base.as_ref().map(BaseVariety::num_vars))
            .unwrap_or_else(|| infer_num_vars(self.terms.iter().flatten()));
        let field = CycloField::new(self.field_order.unwrap_or(self.d))?;
        let ring = PolyRing::new(field, num_vars);
        let terms = self
            .terms
            .iter()
            .map(|t| t.iter().map(|a| ring.parse(a)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok((ProductDecomposition::new(self.d, self.n, terms)?, base))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format_version: Option<String>,
    pub d: u32,
    pub size: usize,
    pub n: u32,
    pub field_order: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_vars: Option<usize>,
    pub entries: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<Vec<Vec<String>>>>,
    pub target: String,
    #[serde(default)]
    pub term_count: usize,
}

impl RootJson {
    pub fn from_root(root: &MatrixRoot) -> Self {
        RootJson {
            format_version: version(),
            d: root.d,
            size: root.size(),
            n: root.n,
            field_order: root.field_order(),
            num_vars: Some(root.ring().num_vars()),
            entries: root.first_factor().to_strings(),
            factors: match &root.factors {
                RootFactors::Power(_) => None,
                RootFactors::Product(bs) => Some(bs.iter().map(PolyMatrix::to_strings).collect()),
            },
            target: root.target.to_string(),
            term_count: root.term_count,
        }
    }

    fn parse_matrix(&self, ring: &PolyRing, rows: &[Vec<String>]) -> Result<PolyMatrix, FormatError> {
        if rows.len() != self.size || rows.iter().any(|r| r.len() != self.size) {
            return Err(FormatError::Invalid(format!("matrix is not {0}x{0}", self.size)));
        }
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|e| ring.parse(e)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PolyMatrix::from_rows(ring, parsed)?)
    }

    pub fn to_root(&self) -> Result<MatrixRoot, FormatError> {
        check_version(&self.format_version)?;
        if self.d == 0 || self.size == 0 {
            return Err(FormatError::Invalid("d and size must be positive".into()));
        }
        let field: Arc<CycloField> = CycloField::new(self.field_order)?;
        let num_vars = self
            .num_vars
            .unwrap_or_else(|| infer_num_vars(self.entries.iter().flatten().chain(std::iter::once(&self.target))));
        let ring = PolyRing::new(field, num_vars).with_t(self.n);
        let target = ring.parse(&self.target)?;
        let factors = match &self.factors {
            None => RootFactors::Power(self.parse_matrix(&ring, &self.entries)?),
            Some(fs) => {
                if fs.len() != self.d as usize {
                    return Err(FormatError::Invalid(format!("{} factors for d = {}", fs.len(), self.d)));
                }
                RootFactors::Product(fs.iter().map(|f| self.parse_matrix(&ring, f)).collect::<Result<_, _>>()?)
            }
        };
        Ok(MatrixRoot { d: self.d, n: self.n, target, term_count: self.term_count, factors })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateJson {
    pub format_version: Option<String>,
    pub base: BaseJson,
    pub n: u32,
    pub d: u32,
    pub decomposition: DecompositionJson,
    pub root: RootJson,
    pub rank: usize,
    pub verified: bool,
    pub log: Vec<String>,
}

impl CertificateJson {
    pub fn from_certificate(c: &UlrichCertificate) -> Self {
        CertificateJson {
            format_version: version(),
            base: BaseJson::from_variety(&c.base),
            n: c.n,
            d: c.d,
            decomposition: DecompositionJson::from_decomposition(&c.decomposition, None),
            root: RootJson::from_root(&c.root),
            rank: c.rank,
            verified: c.verified,
            log: c.log.clone(),
        }
    }
}

/// A root document, or a certificate embedding one under `"root"`.
pub fn parse_root_document(text: &str) -> Result<MatrixRoot, FormatError> {
    Ok(parse_root_and_decomposition(text)?.0)
}

/// The root of a root or certificate document, plus the certificate's
/// decomposition when present.
pub fn parse_root_and_decomposition(text: &str) -> Result<(MatrixRoot, Option<ProductDecomposition>), FormatError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let Some(r) = value.get("root") else {
        return Ok((serde_json::from_value::<RootJson>(value)?.to_root()?, None));
    };
    check_version(&value.get("format_version").and_then(|v| v.as_str()).map(String::from))?;
    let root = serde_json::from_value::<RootJson>(r.clone())?.to_root()?;
    let dec = match value.get("decomposition") {
        Some(dv) => {
            let mut dj = serde_json::from_value::<DecompositionJson>(dv.clone())?;
            dj.num_vars.get_or_insert(root.ring().num_vars());
            Some(dj.to_decomposition()?.0)
        }
        None => None,
    };
    Ok((root, dec))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StageJson {
    pub d: u32,
    pub m_deg: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverSpecJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format_version: Option<String>,
    pub stages: Vec<StageJson>,
}

impl CoverSpecJson {
    pub fn to_spec(&self) -> Result<AbelianCoverSpec, FormatError> {
        check_version(&self.format_version)?;
        Ok(AbelianCoverSpec::new(
            self.stages.iter().map(|s| CoverStage { d: s.d, m_deg: s.m_deg, branch_ref: s.branch.clone() }).collect(),
        )?)
    }
}
