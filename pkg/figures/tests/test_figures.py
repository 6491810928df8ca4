import numpy as np
import pytest

from bisbm_figures import (
    FigureInputError,
    FigureSpec,
    build_adjacency_figure,
    build_hist_figure,
    build_sweep_figure,
    render,
)

SWEEP_HEADER = "method,lambda,nmi_q10,nmi_median,nmi_q90\n"
HIST_HEADER = "method,replicate,seed,score,adjusted_score,seconds,pure_type\n"


@pytest.fixture
def sweep_csv(tmp_path):
    rows = [SWEEP_HEADER]
    for method in ("bisbm_dc", "modularity_wproj"):
        for i in range(21):
            lam = round(0.05 * i, 2)
            mid = lam if method == "bisbm_dc" else lam / 2
            rows.append(f"{method},{lam},{max(0, mid - 0.1)},{mid},{min(1, mid + 0.1)}\n")
    path = tmp_path / "agg.csv"
    path.write_text("".join(rows))
    return str(path)


@pytest.fixture
def hist_csv(tmp_path):
    rng = np.random.default_rng(0)
    rows = [HIST_HEADER]
    for method, loc in (("bisbm", -100.0), ("sbm", -120.0)):
        for rep in range(50):
            score = loc + rng.normal()
            rows.append(f"{method},{rep},{rep},{score},{score},0.01,1\n")
    path = tmp_path / "cmp.csv"
    path.write_text("".join(rows))
    return str(path)


@pytest.fixture
def network_files(tmp_path):
    edges = tmp_path / "edges.tsv"
    edges.write_text("# comment\n0\t3\n0\t4\n1\t4\n2\t5\t2\n")
    types = tmp_path / "types.tsv"
    types.write_text("".join(f"{i}\t{'a' if i < 3 else 'b'}\n" for i in range(6)))
    partition = tmp_path / "partition.tsv"
    partition.write_text("0\t0\n1\t0\n2\t1\n3\t2\n4\t2\n5\t3\n")
    return str(edges), str(types), str(partition)


class TestSweepFigure:
    def test_series_counts(self, sweep_csv):
        fig = build_sweep_figure(sweep_csv)
        ax = fig.axes[0]
        assert len(ax.lines) == 2          # one median line per method
        assert len(ax.collections) == 2    # one shaded band per method
        assert {t.get_text() for t in ax.legend_.get_texts()} == {
            "bisbm_dc", "modularity_wproj"
        }

    def test_missing_column_rejected(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("method,lambda,nmi_median\nx,0.0,1.0\n")
        with pytest.raises(FigureInputError, match="missing columns"):
            build_sweep_figure(str(bad))

    def test_empty_rejected(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text(SWEEP_HEADER)
        with pytest.raises(FigureInputError, match="no data rows"):
            build_sweep_figure(str(empty))


class TestHistFigure:
    def test_two_overlaid_histograms(self, hist_csv):
        fig = build_hist_figure(hist_csv)
        ax = fig.axes[0]
        assert len(ax.patches) > 0
        assert {t.get_text() for t in ax.legend_.get_texts()} == {"bisbm", "sbm"}


class TestAdjacencyFigure:
    def test_blocks_sorted_by_partition(self, network_files):
        edges, types, partition = network_files
        fig = build_adjacency_figure(edges, types, partition)
        img = fig.axes[0].images[0].get_array()
        assert img.shape == (3, 3)
        # vertex 2 (group 1) sorts last among type-a; its weight-2 edge to
        # vertex 5 (group 3, last among type-b) lands bottom-right
        assert img[2, 2] == 2

    def test_non_bipartite_edge_rejected(self, tmp_path, network_files):
        _, types, partition = network_files
        bad = tmp_path / "bad_edges.tsv"
        bad.write_text("0\t1\n")
        with pytest.raises(FigureInputError, match="not bipartite"):
            build_adjacency_figure(str(bad), types, partition)


class TestRendering:
    def test_render_all_kinds(self, tmp_path, sweep_csv, hist_csv, network_files):
        out1 = str(tmp_path / "sweep.png")
        out2 = str(tmp_path / "hist.png")
        out3 = str(tmp_path / "adj.png")
        render(FigureSpec("sweep", (sweep_csv,), out1))
        render(FigureSpec("histogram", (hist_csv,), out2))
        render(FigureSpec("adjacency", network_files, out3))
        for out in (out1, out2, out3):
            payload = open(out, "rb").read()
            assert payload[:8] == b"\x89PNG\r\n\x1a\n"
            assert len(payload) > 1000

    def test_rendering_is_deterministic(self, tmp_path, sweep_csv):
        a = str(tmp_path / "a.png")
        b = str(tmp_path / "b.png")
        render(FigureSpec("sweep", (sweep_csv,), a))
        render(FigureSpec("sweep", (sweep_csv,), b))
        assert open(a, "rb").read() == open(b, "rb").read()

    def test_unknown_kind(self, sweep_csv, tmp_path):
        with pytest.raises(FigureInputError):
            render(FigureSpec("pie", (sweep_csv,), str(tmp_path / "x.png")))


class TestCli:
    def test_sweep_cli(self, sweep_csv, tmp_path, capsys):
        from bisbm_figures.cli import main_sweep

        out = str(tmp_path / "s.png")
        assert main_sweep([sweep_csv, out]) == 0
        assert "wrote" in capsys.readouterr().out

    def test_hist_cli(self, hist_csv, tmp_path):
        from bisbm_figures.cli import main_hist

        assert main_hist([hist_csv, str(tmp_path / "h.png")]) == 0

    def test_adj_cli(self, network_files, tmp_path):
        from bisbm_figures.cli import main_adj

        edges, types, partition = network_files
        assert main_adj([edges, types, partition, str(tmp_path / "a.png")]) == 0

    def test_missing_file_exit_code(self, tmp_path):
        from bisbm_figures.cli import main_sweep

        assert main_sweep([str(tmp_path / "nope.csv"), str(tmp_path / "o.png")]) == 2


class TestAgainstRealBenchOutputs:
    """End-to-end: render real benchmark artifacts when the primary package
    is installed (skipped otherwise; the figure scripts themselves never
    import it)."""

    def test_real_sweep_and_compare_outputs(self, tmp_path):
        bisbm = pytest.importorskip("bisbm")
        from bisbm import bench

        inst = bisbm.make_easy_case(n_per_side=40, mean_degree=6.0)
        config = bench.SweepConfig(
            instance=inst,
            lambdas=[0.0, 0.5, 1.0],
            methods=[
                bench.SweepMethod("kl", "bipartite", bisbm.BISBM_DC),
                bench.SweepMethod("modularity", "weighted-projection"),
            ],
            replicates=3,
            restarts=2,
            side="a",
            base_seed=11,
        )
        result = bench.run_sweep(config)
        agg = tmp_path / "agg.csv"
        agg.write_text(result.aggregate_csv())
        fig = build_sweep_figure(str(agg))
        assert len(fig.axes[0].lines) == 2
        assert len(fig.axes[0].collections) == 2

        net = bisbm.sample_network(inst, seed=3)
        perf = bench.run_perf_comparison(net, 2, 2, replicates=4, seed=5)
        cmp_csv = tmp_path / "cmp.csv"
        cmp_csv.write_text(perf.csv())
        fig2 = build_hist_figure(str(cmp_csv))
        assert {t.get_text() for t in fig2.axes[0].legend_.get_texts()} == {
            "bisbm", "sbm"
        }

        edges = tmp_path / "net.tsv"
        edges.write_text(bisbm.edge_list_text(net))
        types = tmp_path / "types.tsv"
        types.write_text(bisbm.types_text(net.vertex_type))
        partition = tmp_path / "planted.tsv"
        partition.write_text(bisbm.partition_text(inst.partition))
        out = tmp_path / "adj.png"
        render(FigureSpec("adjacency", (str(edges), str(types), str(partition)),
                          str(out)))
        assert out.exists()
