//! HTTP front end over [`crate::api`].

use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::{DefaultBodyLimit, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;

use reelscript_core::config::Config;

use crate::api::{self, Reply};

/// Room for a 5 MB chart after JSON escaping; the compiler enforces the
/// chart limit itself.
pub const BODY_LIMIT: usize = 16 * 1024 * 1024;

pub const DEFAULT_PORT: u16 = 8080;

impl IntoResponse for Reply {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, [(header::CONTENT_TYPE, self.content_type)], self.body).into_response()
    }
}

type Shared = State<Arc<Config>>;

// Compilation is CPU-bound and may wait on an adapter subprocess.
async fn blocking(f: impl FnOnce() -> Reply + Send + 'static) -> Reply {
    tokio::task::spawn_blocking(f).await.unwrap_or_else(|e| Reply {
        status: 500,
        content_type: "text/plain",
        body: format!("handler failed: {e}"),
    })
}

async fn compile(State(config): Shared, body: String) -> Reply {
    blocking(move || api::compile(&config, &body)).await
}

async fn render(State(config): Shared, body: String) -> Reply {
    blocking(move || api::render(&config, &body)).await
}

async fn frame(State(config): Shared, body: String) -> Reply {
    blocking(move || api::frame(&config, &body)).await
}

async fn validate(State(config): Shared, body: String) -> Reply {
    blocking(move || api::validate(&config, &body)).await
}

async fn effects(State(config): Shared) -> Reply {
    api::effects(&config)
}

async fn health() -> Reply {
    api::health()
}

pub fn router(config: Arc<Config>) -> Router {
    Router::new()
        .route("/compile", post(compile))
        .route("/render", post(render))
        .route("/frame", post(frame))
        .route("/validate", post(validate))
        .route("/effects", get(effects))
        .route("/health", get(health))
        .layer(DefaultBodyLimit::max(BODY_LIMIT))
        .with_state(config)
}

pub async fn serve(config: Config, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(config))).await
}
