import plotly.express as px
import plotly.graph_objects as go
import pandas as pd

# Consistent color palette
ALGORITHM_COLORS = {
    "lms": "#e74c3c",
    "rls": "#e67e22",
    "diffusion_lms": "#f39c12",
    "diffusion_rls": "#9b59b6",
    "klms": "#3498db",
    "diffusion_klms": "#2ecc71",
}

SNR_COLORS = {
    10.0: "#e74c3c",
    20.0: "#3498db",
}


def learning_curves(df: pd.DataFrame) -> go.Figure:
    """Log-scale MSE learning curves, one line per algorithm."""
    if df.empty:
        return _empty_figure("No traces available")

    fig = px.line(
        df, x="iteration", y="mse", color="algorithm",
        color_discrete_map=ALGORITHM_COLORS,
        log_y=True,
        title="Learning Curves",
    )
    fig.update_layout(xaxis_title="Iteration", yaxis_title="MSE", legend_title="")
    return fig


def floors_vs_step_size(df: pd.DataFrame) -> go.Figure:
    """Experimental MSE floor against both theoretical floors."""
    if df.empty:
        return _empty_figure("No sweep results available")

    fig = go.Figure()
    fig.add_trace(go.Scatter(x=df["mu"], y=df["empirical_floor"], mode="lines+markers",
                             name="Experimental", line=dict(color=ALGORITHM_COLORS["diffusion_klms"])))
    fig.add_trace(go.Scatter(x=df["mu"], y=df["predicted_floor_fixedpoint"], mode="lines",
                             name="Theory (fixed point)", line=dict(color="#34495e")))
    fig.add_trace(go.Scatter(x=df["mu"], y=df["predicted_floor_eq21"], mode="lines",
                             name="Theory (misadjustment)", line=dict(color="#95a5a6", dash="dash")))
    fig.update_layout(title="MSE Floor vs Step Size", xaxis_title="Step size",
                      yaxis_title="MSE floor", legend_title="")
    return fig


def floors_vs_size(df: pd.DataFrame) -> go.Figure:
    """Mean floor with one-std error bars per network size and SNR."""
    if df.empty:
        return _empty_figure("No sweep results available")

    fig = go.Figure()
    for snr_db, group in df.groupby("snr_db"):
        color = SNR_COLORS.get(float(snr_db))
        fig.add_trace(go.Scatter(
            x=group["size"], y=group["mean_floor"], mode="lines+markers",
            error_y=dict(type="data", array=group["std_floor"]),
            name=f"{snr_db:g} dB", line=dict(color=color),
        ))
        fig.add_trace(go.Scatter(
            x=group["size"], y=group["theory_floor"], mode="lines",
            name=f"{snr_db:g} dB theory", line=dict(color=color, dash="dot"),
        ))
    fig.update_layout(title="MSE Floor vs Number of Nodes", xaxis_title="Nodes",
                      yaxis_title="MSE floor", yaxis_type="log", legend_title="SNR")
    return fig


def transient_comparison(df: pd.DataFrame, time_constant: int = None) -> go.Figure:
    """Predicted and experimental transient, with the time constant marked."""
    if df.empty:
        return _empty_figure("No transient data available")

    long = df.melt(id_vars="n", value_vars=["empirical_mse", "predicted_mse"],
                   var_name="curve", value_name="mse")
    fig = px.line(
        long, x="n", y="mse", color="curve",
        color_discrete_map={"empirical_mse": ALGORITHM_COLORS["diffusion_klms"], "predicted_mse": "#34495e"},
        title="Transient: Theory vs Experiment",
    )
    if time_constant is not None:
        fig.add_vline(x=time_constant, line_dash="dash", line_color="#95a5a6",
                      annotation_text="time constant")
    fig.update_layout(xaxis_title="Iteration", yaxis_title="MSE", legend_title="")
    return fig


def _empty_figure(message: str = "No data") -> go.Figure:
    fig = go.Figure()
    fig.add_annotation(text=message, xref="paper", yref="paper",
                       x=0.5, y=0.5, showarrow=False, font_size=16)
    fig.update_layout(xaxis_visible=False, yaxis_visible=False)
    return fig
