use gridrml_service::{router, ServiceConfig, DEFAULT_BODY_LIMIT};

/// Configuration comes from the environment:
/// `GRIDRML_ADDR` (default `127.0.0.1:8080`), `GRIDRML_BODY_LIMIT` in bytes,
/// `GRIDRML_ALLOWED_ORIGIN` for CORS.
#[tokio::main]
async fn main() {
    let addr = std::env::var("GRIDRML_ADDR").unwrap_or_else(|_| "127.0.0.1:8080".into());
    let body_limit = match std::env::var("GRIDRML_BODY_LIMIT") {
        Ok(v) => v.parse().unwrap_or_else(|_| {
            eprintln!("GRIDRML_BODY_LIMIT must be a byte count, got '{v}'");
            std::process::exit(2)
        }),
        Err(_) => DEFAULT_BODY_LIMIT,
    };
    let config = ServiceConfig {
        body_limit,
        allowed_origin: std::env::var("GRIDRML_ALLOWED_ORIGIN").ok(),
    };
    let listener = match tokio::net::TcpListener::bind(&addr).await {
        Ok(l) => l,
        Err(e) => {
            eprintln!("cannot bind {addr}: {e}");
            std::process::exit(2)
        }
    };
    eprintln!("listening on http://{addr}");
    if let Err(e) = axum::serve(listener, router(config)).await {
        eprintln!("server error: {e}");
        std::process::exit(1);
    }
}
