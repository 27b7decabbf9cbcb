"""Report assembly and emission: text tables, JSON, DOT, and figures.

A report is a plain JSON-able payload built from a computed stack; emission
is deterministic (sorted keys, stable orderings) so identical inputs give
identical bytes.  The figure mirrors the usual Carnot-group picture: degree
along the horizontal axis, weight increasing downward, one arrow per nonzero
d_c^j restriction, chains color-coded.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .filtration import classical_pages, compare
from .hodge import build_hodge_kit
from .multicomplex import MulticomplexData, total_cohomology, total_complex
from .rumin import build_rumin, rumin_cohomology
from .spectral import SpectralWorkspace


@dataclass
class ComputedStack:
    """Everything derived from one multicomplex, built once."""

    mc: MulticomplexData
    kit: object
    rum: object
    ws: SpectralWorkspace
    model: Optional[object] = None  # DeRhamModel when built from an algebra


def build_stack(mc: MulticomplexData, model=None) -> ComputedStack:
    kit = build_hodge_kit(mc)
    rum = build_rumin(mc, kit)
    return ComputedStack(mc, kit, rum, SpectralWorkspace(rum), model)


@dataclass
class Report:
    payload: dict

    def to_json(self) -> str:
        return json.dumps(self.payload, indent=1, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "Report":
        return Report(json.loads(text))

    def __eq__(self, other):
        return isinstance(other, Report) and self.payload == other.payload


def build_report(stack: ComputedStack, name: str = "", max_chains: int = 64,
                 with_oracle: bool = True, star_report=None) -> Report:
    mc = stack.mc
    ws = stack.ws
    tc = stack.rum.tc
    payload: dict = {}
    payload["instance"] = {
        "name": name,
        "kind": "carnot" if stack.model is not None else "multicomplex",
        "Q": mc.Q,
        "s": mc.s,
        "total_dims": {str(h): tc.dims[h] for h in tc.degrees},
    }
    if stack.model is not None:
        payload["instance"]["poly_degree"] = stack.model.spec.poly_degree
        payload["instance"]["dim"] = stack.model.spec.dim

    payload["e0_dims"] = [
        {"degree": a + b, "weight": a, "dim": sp.dim}
        for (a, b), sp in sorted(stack.kit.e0_spaces.items(), key=lambda t: (t[0][0] + t[0][1], t[0][0]))
        if sp.dim
    ]
    payload["index_sets"] = [
        {"degree": k, "weight": p, "orders": orders}
        for (p, k), orders in sorted(ws.index_sets().items(), key=lambda t: (t[0][1], t[0][0]))
    ]
    chains, truncated = ws.enumerate_spectral_complexes(max_chains)
    payload["chains_truncated"] = truncated
    payload["chains"] = [
        {
            "orders": list(ch.orders),
            "stations": [
                {"degree": st.degree, "weight": st.weight, "z_order": st.z_order,
                 "b_order": st.b_order, "dim": st.space.dim}
                for st in ch.stations
            ],
            "delta_summands": [list(s) for s in ch.summand_orders],
        }
        for ch in chains
    ]
    coh: dict = {"rumin": {}, "total": {}, "einf": []}
    for h in tc.degrees:
        coh["rumin"][str(h)] = rumin_cohomology(stack.rum, h)[0]
        coh["total"][str(h)] = total_cohomology(tc, h)[0]
        stab = ws.stabilized_cohomology(h)
        for p, d in sorted(stab.per_weight.items()):
            coh["einf"].append({"degree": h, "weight": p, "dim": d})
    payload["cohomology"] = coh
    if with_oracle:
        page = classical_pages(tc, mc.Q + 2)
        rep = compare(page, ws, mc.Q + 2)
        payload["oracle"] = {"ok": rep.ok, "checked": rep.checked,
                             "verdict": rep.summary()}
    if star_report is not None:
        payload["star"] = {"ok": star_report.ok,
                           "checked": len(star_report.checked),
                           "verdict": star_report.summary(),
                           "mismatches": list(star_report.mismatches)}
    return Report(payload)


# ---------------------------------------------------------------------------
# text / dot / figure emission
# ---------------------------------------------------------------------------

def _table(rows: list[list[str]], header: list[str]) -> str:
    cols = len(header)
    widths = [len(h) for h in header]
    for r in rows:
        for i in range(cols):
            widths[i] = max(widths[i], len(r[i]))
    def fmt(r):
        return "  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip()
    lines = [fmt(header), fmt(["-" * w for w in widths])]
    lines += [fmt(r) for r in rows]
    return "\n".join(lines)


def report_to_text(report: Report) -> str:
    p = report.payload
    out = []
    inst = p["instance"]
    head = f"instance: {inst.get('name') or inst['kind']}  Q={inst['Q']} s={inst['s']}"
    if "poly_degree" in inst:
        head += f" D={inst['poly_degree']}"
    out.append(head)
    out.append("")
    out.append("harmonic dimensions (e0):")
    out.append(_table(
        [[str(e["degree"]), str(e["weight"]), str(e["dim"])] for e in p["e0_dims"]],
        ["degree", "weight", "dim"]))
    out.append("")
    out.append("differential orders (I_{p,k}):")
    out.append(_table(
        [[str(e["degree"]), str(e["weight"]),
          ",".join(map(str, e["orders"])) or "-"] for e in p["index_sets"]],
        ["degree", "weight", "orders"]))
    out.append("")
    out.append(f"spectral complexes: {len(p['chains'])}"
               + (" (truncated)" if p["chains_truncated"] else ""))
    for i, ch in enumerate(p["chains"]):
        path = " -> ".join(
            f"({st['degree']},{st['weight']})[{st['dim']}]" for st in ch["stations"])
        orders = ",".join(map(str, ch["orders"]))
        summands = ";".join(",".join(map(str, s)) or "-" for s in ch["delta_summands"])
        out.append(f"  chain {i}: {path}")
        out.append(f"    orders: {orders}   summands: {summands}")
    out.append("")
    out.append("cohomology per degree:")
    degs = sorted(p["cohomology"]["total"], key=int)
    rows = []
    for h in degs:
        einf = sum(e["dim"] for e in p["cohomology"]["einf"] if str(e["degree"]) == h)
        rows.append([h, str(p["cohomology"]["rumin"][h]),
                     str(p["cohomology"]["total"][h]), str(einf)])
    out.append(_table(rows, ["degree", "rumin", "total", "E_inf"]))
    if "oracle" in p:
        out.append("")
        out.append("oracle: " + p["oracle"]["verdict"])
    if "star" in p:
        out.append("")
        out.append("star duality: " + p["star"]["verdict"])
    out.append("")
    return "\n".join(out)


def emit_diagram(report: Report) -> str:
    """DOT digraph: one node per nonzero e0(p,k), one edge per order in I_{p,k},
    one cluster per enumerated chain; layout hints follow degree/weight."""
    p = report.payload
    lines = ["digraph spectral_complexes {", '  rankdir="LR";',
             '  node [shape=box, fontsize=10];']
    node_ids = {}
    for e in p["e0_dims"]:
        nid = f"n_{e['degree']}_{e['weight']}"
        node_ids[(e["weight"], e["degree"])] = nid
    defined = set()
    for ci, ch in enumerate(p["chains"]):
        members = []
        for st in ch["stations"]:
            key = (st["weight"], st["degree"])
            if key in node_ids and key not in defined:
                members.append(key)
                defined.add(key)
        lines.append(f"  subgraph cluster_chain_{ci} {{")
        lines.append(f'    label="chain {ci}: orders '
                     + ",".join(map(str, ch["orders"])) + '";')
        for key in members:
            e = next(x for x in p["e0_dims"]
                     if (x["weight"], x["degree"]) == key)
            lines.append(
                f'    {node_ids[key]} [label="k={e["degree"]} w={e["weight"]}\\n'
                f'dim {e["dim"]}"];')
        lines.append("  }")
    for e in p["e0_dims"]:
        key = (e["weight"], e["degree"])
        if key not in defined:
            lines.append(
                f'  {node_ids[key]} [label="k={e["degree"]} w={e["weight"]}\\n'
                f'dim {e["dim"]}"];')
            defined.add(key)
    for e in p["index_sets"]:
        src = (e["weight"], e["degree"])
        for j in e["orders"]:
            tgt = (e["weight"] + j, e["degree"] + 1)
            if tgt in node_ids:
                lines.append(
                    f'  {node_ids[src]} -> {node_ids[tgt]} [label="d_c^{j}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_figure(report: Report, path: str) -> None:
    """Weight-by-degree diagram as a figure: degree horizontal, weight downward."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    p = report.payload
    fig, ax = plt.subplots(figsize=(7, 5))
    for e in p["e0_dims"]:
        k, w, d = e["degree"], e["weight"], e["dim"]
        ax.scatter([k], [w], s=320, marker="s", color="#dce6f2",
                   edgecolor="#31506e", zorder=3)
        ax.annotate(f"{d}", (k, w), ha="center", va="center", fontsize=8, zorder=4)
    colors = ["#b03a2e", "#1e8449", "#7d3c98", "#b7950b", "#2874a6"]
    for ci, ch in enumerate(p["chains"]):
        color = colors[ci % len(colors)]
        for t, j in enumerate(ch["orders"]):
            s0 = ch["stations"][t]
            s1 = ch["stations"][t + 1]
            ax.annotate(
                "", xy=(s1["degree"] - 0.08, s1["weight"]),
                xytext=(s0["degree"] + 0.08, s0["weight"]),
                arrowprops=dict(arrowstyle="->", color=color, lw=1.4,
                                shrinkA=12, shrinkB=12), zorder=2)
            mx = (s0["degree"] + s1["degree"]) / 2
            my = (s0["weight"] + s1["weight"]) / 2
            ax.annotate(f"$d_c^{{{j}}}$", (mx, my - 0.12), color=color,
                        fontsize=9, ha="center")
    ax.set_xlabel("degree")
    ax.set_ylabel("weight")
    inst = p["instance"]
    title = inst.get("name") or inst["kind"]
    if "poly_degree" in inst:
        title += f" (D={inst['poly_degree']})"
    ax.set_title(title)
    ax.invert_yaxis()
    degs = [e["degree"] for e in p["e0_dims"]] or [0]
    ws_ = [e["weight"] for e in p["e0_dims"]] or [0]
    ax.set_xticks(sorted(set(degs)))
    ax.set_yticks(sorted(set(ws_)))
    ax.grid(True, linestyle=":", alpha=0.5, zorder=0)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
