//! Shared plumbing for the `culina` command-line tools: configuration
//! resolution, run manifests, and text-artifact formatting.
//!
//! The binaries stay thin; everything testable lives here.

pub mod cli;
pub mod commands;
pub mod manifest;
pub mod outputs;
pub mod settings;

/// Maps an error class onto the documented process exit code.
pub fn exit_code(class: culina_core::error::ErrorClass) -> i32 {
    match class {
        culina_core::error::ErrorClass::Config => 2,
        culina_core::error::ErrorClass::Data => 3,
        culina_core::error::ErrorClass::Numeric => 4,
    }
}

/// Short machine-readable name for an error class.
pub fn class_name(class: culina_core::error::ErrorClass) -> &'static str {
    match class {
        culina_core::error::ErrorClass::Config => "config",
        culina_core::error::ErrorClass::Data => "data",
        culina_core::error::ErrorClass::Numeric => "numeric",
    }
}

/// Prints one machine-parsable JSON error line to stderr and returns
/// the exit code the process should end with.
pub fn report_error(err: &culina_core::Error) -> i32 {
    let class = err.class();
    let line = serde_json::json!({
        "error": class_name(class),
        "message": err.to_string().replace('\n', " "),
    });
    eprintln!("{line}");
    exit_code(class)
}
