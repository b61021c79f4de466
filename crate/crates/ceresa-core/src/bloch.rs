//! placeholder
use crate::bounds::BoundMode;
use crate::certifier::Certificate;
use crate::quartic::TernaryQuarticZ;
use crate::Result;

pub fn verify_bloch_certificate(
    _cert: &Certificate,
    _curve: &TernaryQuarticZ,
    _mode: BoundMode,
) -> Result<bool> {
    Err(crate::Error::Internal("bloch verification not yet wired".into()))
}
