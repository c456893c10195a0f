//! Machine-readable result records (one JSON object per line, or CSV rows).
//! Field names are a stable interface; entropy is always reported in nats.

use serde::Serialize;
use treeshift::{EntropyResult, Snre, TypeLabel};

#[derive(Debug, Clone, Serialize)]
pub struct TypeRecord {
    pub applicable: Vec<String>,
    pub primary: Option<String>,
    pub provenance: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeRecord {
    pub ln_kappa: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultRecord {
    pub id: String,
    pub d: usize,
    pub k: usize,
    pub indicators: Vec<Vec<u64>>,
    #[serde(rename = "type")]
    pub type_label: TypeRecord,
    pub entropy_nats: f64,
    pub residual: f64,
    pub iterations: usize,
    pub method: String,
    pub degree: DegreeRecord,
    pub flags: Vec<String>,
}

impl ResultRecord {
    pub fn new(id: &str, f: &Snre, label: Option<&TypeLabel>, r: &EntropyResult) -> Self {
        let indicators = f
            .equations()
            .map(|eq| eq.indicator_vector().coefficients().to_vec())
            .collect();
        let type_label = match label {
            Some(l) => TypeRecord {
                applicable: l.applicable().iter().map(|t| t.as_letter().to_string()).collect(),
                primary: l.primary().map(|t| t.as_letter().to_string()),
                provenance: Some(l.provenance().as_str().to_string()),
            },
            None => TypeRecord { applicable: Vec::new(), primary: None, provenance: None },
        };
        ResultRecord {
            id: id.to_string(),
            d: f.d(),
            k: f.k(),
            indicators,
            type_label,
            entropy_nats: r.h,
            residual: r.residual,
            iterations: r.iterations,
            method: r.method.as_str().to_string(),
            degree: DegreeRecord { ln_kappa: r.ln_kappa, kappa: r.kappa },
            flags: r.flags.iter().map(|f| f.as_str().to_string()).collect(),
        }
    }

    pub fn to_ndjson(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    pub const CSV_HEADER: &'static str =
        "id,d,k,indicators,type,primary,entropy_nats,residual,iterations,method,ln_kappa,kappa,flags";

    pub fn to_csv_row(&self) -> String {
        let indicators = self
            .indicators
            .iter()
            .map(|v| {
                v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
            })
            .collect::<Vec<_>>()
            .join(";");
        format!(
            "{},{},{},\"{}\",{},{},{:.15e},{:.3e},{},{},{:.6},{:.6},{}",
            self.id,
            self.d,
            self.k,
            indicators,
            self.type_label.applicable.join(";"),
            self.type_label.primary.as_deref().unwrap_or("-"),
            self.entropy_nats,
            self.residual,
            self.iterations,
            self.method,
            self.degree.ln_kappa,
            self.degree.kappa,
            self.flags.join(";"),
        )
    }
}
