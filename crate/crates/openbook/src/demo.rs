//! The end-to-end reproduction pipeline: from the 10_153 monodromy through
//! the (2,1)-cable and a Stallings twist to a right-veering fibered-knot
//! monodromy with coefficient one half.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{find_entry, CatalogEntry, CatalogError};
use crate::certificate::{build_certificate, render_growth, Certificate, GrowthRecord};
use crate::fdtc::{fdtc, FdtcConfig, FdtcError, FdtcValue, VeerVerdict};
use crate::mapping::{growth_evidence, AnalyzeError, GrowthVerdict};
use crate::openbook::{
    band_sum_curve, cable_2_1, stallings_twist, BandSumSpec, OpenBook, OpenBookError,
};
use crate::surface::polygon_handle_arc;

#[derive(Debug, Error)]
pub enum DemoError {
    #[error("stage `{stage}` failed: expected {expected}, got {got}")]
    StageMismatch {
        stage: String,
        expected: String,
        got: String,
    },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    OpenBook(#[from] OpenBookError),
    #[error(transparent)]
    Fdtc(#[from] FdtcError),
    #[error(transparent)]
    Analyze(#[from] AnalyzeError),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DemoCertificate {
    pub schema: u64,
    pub tool_version: String,
    pub pipeline: String,
    pub stages: Vec<StageRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: String,
    pub certificate: Certificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthRecord>,
}

fn expect_exact(stage: &str, value: &FdtcValue, expected: &BigRational) -> Result<(), DemoError> {
    match value {
        FdtcValue::Exact(v) if v == expected => Ok(()),
        other => Err(DemoError::StageMismatch {
            stage: stage.to_string(),
            expected: format!("fdtc = {expected}"),
            got: format!("{other:?}"),
        }),
    }
}

fn expect_veer(stage: &str, got: VeerVerdict, want: VeerVerdict) -> Result<(), DemoError> {
    if got == want {
        Ok(())
    } else {
        Err(DemoError::StageMismatch {
            stage: stage.to_string(),
            expected: format!("veering {want:?}"),
            got: format!("{got:?}"),
        })
    }
}

/// Runs the whole construction on a catalog entry (the bundled 10_153 by
/// default), checking every stage against its expected invariants.
pub fn paper_demo(
    entry: &CatalogEntry,
    cfg_overrides: Option<FdtcConfig>,
    growth_iterates: usize,
) -> Result<DemoCertificate, DemoError> {
    let cfg = cfg_overrides.unwrap_or_else(|| entry.fdtc_config());
    let mut stages = Vec::new();

    // Stage 1: the companion monodromy has vanishing coefficient and is
    // neither right- nor left-veering.
    let ob = OpenBook::from_word_on_fiber(&entry.name, entry.genus, &entry.alphabet, &entry.word)?;
    let m = &ob.monodromy;
    let cert1 = fdtc(&entry.fiber, m, 0, &cfg)?;
    expect_exact("companion-fdtc", &cert1.value, &BigRational::zero())?;
    expect_veer("companion-veering", cert1.veering, VeerVerdict::Neither)?;
    if !cert1.veering_witnessed {
        return Err(DemoError::StageMismatch {
            stage: "companion-veering".into(),
            expected: "two-sided witnesses".into(),
            got: "unwitnessed".into(),
        });
    }
    stages.push(StageRecord {
        stage: "companion".into(),
        certificate: build_certificate(
            &entry.fiber,
            ob.provenance.describe(),
            &cfg,
            &cert1,
            None,
            entry.genus,
        ),
        growth: None,
    });

    // Stage 2: the (2,1)-cable has coefficient exactly one half and
    // preserves the reducing multicurve (checked inside the constructor).
    let (cable, cert2) = cable_2_1(&ob, &entry.alphabet, &cfg)?;
    let half = BigRational::new(1.into(), 2.into());
    expect_exact("cable-fdtc", &cert2.value, &half)?;
    stages.push(StageRecord {
        stage: "cable".into(),
        certificate: build_certificate(
            &cable.fiber,
            cable.provenance.describe(),
            &cfg,
            &cert2,
            None,
            cable.genus,
        ),
        growth: None,
    });

    // Stage 3: the band sum of the two copies of the nonseparating arc.
    let arc = polygon_handle_arc(entry.genus, 1, &entry.fiber, &format!("a{}", entry.genus));
    let curve = band_sum_curve(&cable, &ob, &BandSumSpec { arc })?;

    // Stage 4: the Stallings twist along it.
    let twisted = stallings_twist(&cable, &curve, 1, "band_sum(c)")?;
    let big_cfg = FdtcConfig::for_fiber(&cable.fiber, true);
    let cert4 = fdtc(&cable.fiber, &twisted.monodromy, 0, &big_cfg)?;
    expect_exact("stallings-fdtc", &cert4.value, &half)?;
    expect_veer("stallings-veering", cert4.veering, VeerVerdict::Right)?;
    let seed = cable.fiber.labels.curves["c1@0"].clone();
    let growth = growth_evidence(
        &cable.fiber,
        &twisted.monodromy,
        &seed,
        growth_iterates,
        0.01,
    )?;
    if growth.verdict != GrowthVerdict::Exponential {
        return Err(DemoError::StageMismatch {
            stage: "stallings-growth".into(),
            expected: "exponential".into(),
            got: format!("{:?}", growth.verdict),
        });
    }
    stages.push(StageRecord {
        stage: "stallings".into(),
        certificate: build_certificate(
            &cable.fiber,
            twisted.provenance.describe(),
            &big_cfg,
            &cert4,
            Some(&growth),
            cable.genus,
        ),
        growth: Some(render_growth(&growth)),
    });

    Ok(DemoCertificate {
        schema: crate::certificate::SCHEMA,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        pipeline: format!("{} -> cable(2,1) -> stallings(+1)", entry.name),
        stages,
    })
}

/// The default demo entry.
pub fn demo_entry() -> Result<CatalogEntry, CatalogError> {
    let entries = crate::catalog::builtin_catalog();
    find_entry(&entries, "10_153").cloned()
}
