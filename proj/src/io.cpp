#include "onsflow/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "onsflow/ops.hpp"

namespace onsflow {

namespace {

void fail_io(const std::string& path, const std::string& what) {
    throw ContractError("io: " + what + " ('" + path + "')");
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Snapshot make_snapshot(const ChnsState& st) {
    Snapshot snap;
    snap.time = st.t;
    snap.s = st.s;
    snap.grid = st.grid;
    CCVectorField ucc = cc_velocity(st.u);
    snap.fields.emplace_back("phi", st.phi);
    snap.fields.emplace_back("u", ucc.x);
    snap.fields.emplace_back("v", ucc.y);
    snap.fields.emplace_back("p", st.p);
    snap.fields.emplace_back("q", st.q);
    return snap;
}

Snapshot make_snapshot(const ElState& st) {
    Snapshot snap;
    snap.time = st.t;
    snap.s = st.s;
    snap.grid = st.grid;
    CCVectorField ucc = cc_velocity(st.u);
    snap.fields.emplace_back("px", st.director.x);
    snap.fields.emplace_back("py", st.director.y);
    snap.fields.emplace_back("u", ucc.x);
    snap.fields.emplace_back("v", ucc.y);
    snap.fields.emplace_back("p", st.p_pressure);
    snap.fields.emplace_back("q", st.q);
    return snap;
}

void write_snapshot_csv(const Snapshot& snap, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail_io(path, "cannot open for writing");
    const GridSpec& g = snap.grid;
    out << "# t=" << fmt17(snap.time) << " s=" << fmt17(snap.s) << "\n";
    out << "# grid nx=" << g.nx << " ny=" << g.ny << " lx=" << fmt17(g.lx)
        << " ly=" << fmt17(g.ly) << " bc_y=" << (g.wall_y() ? "wall" : "periodic") << "\n";
    out << "x,y";
    for (const auto& [name, f] : snap.fields) out << "," << name;
    out << "\n";
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            out << fmt17(g.cell_x(i)) << "," << fmt17(g.cell_y(j));
            for (const auto& [name, f] : snap.fields) out << "," << fmt17(f.at(i, j));
            out << "\n";
        }
    if (!out) fail_io(path, "write failed");
}

Snapshot read_snapshot_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_io(path, "cannot open for reading");
    Snapshot snap;
    std::string line;
    GridSpec g;
    bool have_grid = false;
    std::vector<std::string> names;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            double t = 0, s = 0;
            if (std::sscanf(line.c_str(), "# t=%lf s=%lf", &t, &s) == 2) {
                snap.time = t;
                snap.s = s;
            }
            char bc[32] = {0};
            int nx = 0, ny = 0;
            double lx = 0, ly = 0;
            if (std::sscanf(line.c_str(), "# grid nx=%d ny=%d lx=%lf ly=%lf bc_y=%31s", &nx, &ny,
                            &lx, &ly, bc) == 5) {
                g = make_grid(nx, ny, lx, ly, std::strcmp(bc, "wall") == 0 ? Bc::Wall : Bc::Periodic);
                have_grid = true;
            }
            continue;
        }
        // header row
        std::istringstream hs(line);
        std::string tok;
        while (std::getline(hs, tok, ',')) names.push_back(tok);
        break;
    }
    if (!have_grid || names.size() < 3 || names[0] != "x" || names[1] != "y")
        fail_io(path, "malformed snapshot header");
    snap.grid = g;
    for (std::size_t q = 2; q < names.size(); ++q) snap.fields.emplace_back(names[q], ScalarField(g));
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!std::getline(in, line)) fail_io(path, "truncated data section");
            std::istringstream ls(line);
            std::string tok;
            std::getline(ls, tok, ',');  // x
            std::getline(ls, tok, ',');  // y
            for (auto& [name, f] : snap.fields) {
                if (!std::getline(ls, tok, ',')) fail_io(path, "short data row");
                f.at(i, j) = std::stod(tok);
            }
        }
    return snap;
}

void write_snapshot_vtk(const Snapshot& snap, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail_io(path, "cannot open for writing");
    const GridSpec& g = snap.grid;
    out << "# vtk DataFile Version 3.0\n";
    out << "onsager_flow snapshot t=" << fmt17(snap.time) << " s=" << fmt17(snap.s) << "\n";
    out << "ASCII\n";
    out << "DATASET STRUCTURED_POINTS\n";
    out << "DIMENSIONS " << g.nx << " " << g.ny << " 1\n";
    out << "ORIGIN " << fmt17(g.cell_x(0)) << " " << fmt17(g.cell_y(0)) << " 0\n";
    out << "SPACING " << fmt17(g.hx()) << " " << fmt17(g.hy()) << " 1\n";
    out << "POINT_DATA " << g.ncells() << "\n";
    for (const auto& [name, f] : snap.fields) {
        out << "SCALARS " << name << " double 1\n";
        out << "LOOKUP_TABLE default\n";
        for (int j = 0; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) out << fmt17(f.at(i, j)) << "\n";
        }
    }
    if (!out) fail_io(path, "write failed");
}

void write_energy_header(std::ostream& out) {
    out << "t,E,diss_irr,diss_s,s,s_exact,mass,div_inf\n";
}

void write_energy_row(std::ostream& out, const EnergyRecord& rec) {
    out << fmt17(rec.t) << "," << fmt17(rec.total_energy) << ","
        << fmt17(rec.dissipation_irreversible) << "," << fmt17(rec.dissipation_s) << ","
        << fmt17(rec.s_value) << "," << fmt17(rec.s_exact) << "," << fmt17(rec.mass) << ","
        << fmt17(rec.div_inf) << "\n";
}

std::vector<EnergyRecord> read_energy_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_io(path, "cannot open for reading");
    std::vector<EnergyRecord> out;
    std::string line;
    if (!std::getline(in, line)) fail_io(path, "empty series");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        EnergyRecord r;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf", &r.t, &r.total_energy,
                        &r.dissipation_irreversible, &r.dissipation_s, &r.s_value, &r.s_exact,
                        &r.mass, &r.div_inf) != 8)
            fail_io(path, "malformed series row: " + line);
        out.push_back(r);
    }
    return out;
}

// --- checkpoints ------------------------------------------------------------

namespace {
constexpr char kMagic[8] = {'O', 'N', 'S', 'F', 'C', 'K', 'P', '1'};

void put_u64(std::ostream& out, unsigned long long v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
unsigned long long get_u64(std::istream& in) {
    unsigned long long v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}
void put_f64(std::ostream& out, double v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
double get_f64(std::istream& in) {
    double v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}
}  // namespace

void write_checkpoint(const Checkpoint& ck, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail_io(path, "cannot open for writing");
    out.write(kMagic, sizeof(kMagic));
    put_u64(out, ck.model == ModelKind::Chns ? 0 : 1);
    put_u64(out, ck.scheme == SchemeKind::CN ? 0 : 1);
    put_u64(out, static_cast<unsigned long long>(ck.grid.nx));
    put_u64(out, static_cast<unsigned long long>(ck.grid.ny));
    put_f64(out, ck.grid.lx);
    put_f64(out, ck.grid.ly);
    put_u64(out, ck.grid.wall_y() ? 1 : 0);
    put_u64(out, static_cast<unsigned long long>(ck.step));
    put_f64(out, ck.t);
    put_f64(out, ck.s);
    put_f64(out, ck.s_prev);
    put_f64(out, ck.mass0);
    put_u64(out, ck.arrays.size());
    for (const auto& a : ck.arrays) {
        put_u64(out, a.size());
        out.write(reinterpret_cast<const char*>(a.data()),
                  static_cast<std::streamsize>(a.size() * sizeof(double)));
    }
    if (!out) fail_io(path, "write failed");
}

Checkpoint read_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_io(path, "cannot open for reading");
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        fail_io(path, "not a checkpoint file");
    Checkpoint ck;
    ck.model = get_u64(in) == 0 ? ModelKind::Chns : ModelKind::El;
    ck.scheme = get_u64(in) == 0 ? SchemeKind::CN : SchemeKind::BDF2;
    const int nx = static_cast<int>(get_u64(in));
    const int ny = static_cast<int>(get_u64(in));
    const double lx = get_f64(in);
    const double ly = get_f64(in);
    const bool wall = get_u64(in) != 0;
    ck.grid = make_grid(nx, ny, lx, ly, wall ? Bc::Wall : Bc::Periodic);
    ck.step = static_cast<long long>(get_u64(in));
    ck.t = get_f64(in);
    ck.s = get_f64(in);
    ck.s_prev = get_f64(in);
    ck.mass0 = get_f64(in);
    const auto narr = get_u64(in);
    ck.arrays.resize(narr);
    for (auto& a : ck.arrays) {
        a.resize(get_u64(in));
        in.read(reinterpret_cast<char*>(a.data()),
                static_cast<std::streamsize>(a.size() * sizeof(double)));
    }
    if (!in) fail_io(path, "truncated checkpoint");
    return ck;
}

Checkpoint checkpoint_of(const ChnsState& st, SchemeKind scheme, long long step) {
    Checkpoint ck;
    ck.model = ModelKind::Chns;
    ck.scheme = scheme;
    ck.grid = st.grid;
    ck.step = step;
    ck.t = st.t;
    ck.s = st.s;
    ck.s_prev = st.s_prev;
    ck.mass0 = st.mass0;
    ck.arrays = {st.u.u,      st.u.v,      st.p.a,        st.phi.a,      st.q.a,
                 st.u_prev.u, st.u_prev.v, st.phi_prev.a, st.q_prev.a};
    return ck;
}

Checkpoint checkpoint_of(const ElState& st, SchemeKind scheme, long long step) {
    Checkpoint ck;
    ck.model = ModelKind::El;
    ck.scheme = scheme;
    ck.grid = st.grid;
    ck.step = step;
    ck.t = st.t;
    ck.s = st.s;
    ck.s_prev = st.s_prev;
    ck.mass0 = 0.0;
    ck.arrays = {st.u.u,      st.u.v,           st.p_pressure.a,   st.director.x.a,
                 st.director.y.a, st.q.a,       st.u_prev.u,       st.u_prev.v,
                 st.director_prev.x.a, st.director_prev.y.a, st.q_prev.a};
    return ck;
}

namespace {
void expect_sizes(const Checkpoint& ck, std::size_t n, const char* what) {
    if (ck.arrays.size() != n) throw ContractError(std::string("checkpoint: wrong layout for ") + what);
}
}  // namespace

void restore_state(const Checkpoint& ck, ChnsState& st) {
    expect_sizes(ck, 9, "chns");
    st.grid = ck.grid;
    st.u = FaceVelocity(ck.grid);
    st.u_prev = FaceVelocity(ck.grid);
    st.p = ScalarField(ck.grid);
    st.phi = ScalarField(ck.grid);
    st.q = ScalarField(ck.grid);
    st.phi_prev = ScalarField(ck.grid);
    st.q_prev = ScalarField(ck.grid);
    st.u.u = ck.arrays[0];
    st.u.v = ck.arrays[1];
    st.p.a = ck.arrays[2];
    st.phi.a = ck.arrays[3];
    st.q.a = ck.arrays[4];
    st.u_prev.u = ck.arrays[5];
    st.u_prev.v = ck.arrays[6];
    st.phi_prev.a = ck.arrays[7];
    st.q_prev.a = ck.arrays[8];
    st.t = ck.t;
    st.s = ck.s;
    st.s_prev = ck.s_prev;
    st.mass0 = ck.mass0;
}

void restore_state(const Checkpoint& ck, ElState& st) {
    expect_sizes(ck, 11, "el");
    st.grid = ck.grid;
    st.u = FaceVelocity(ck.grid);
    st.u_prev = FaceVelocity(ck.grid);
    st.p_pressure = ScalarField(ck.grid);
    st.director = CCVectorField(ck.grid);
    st.director_prev = CCVectorField(ck.grid);
    st.q = ScalarField(ck.grid);
    st.q_prev = ScalarField(ck.grid);
    st.u.u = ck.arrays[0];
    st.u.v = ck.arrays[1];
    st.p_pressure.a = ck.arrays[2];
    st.director.x.a = ck.arrays[3];
    st.director.y.a = ck.arrays[4];
    st.q.a = ck.arrays[5];
    st.u_prev.u = ck.arrays[6];
    st.u_prev.v = ck.arrays[7];
    st.director_prev.x.a = ck.arrays[8];
    st.director_prev.y.a = ck.arrays[9];
    st.q_prev.a = ck.arrays[10];
    st.t = ck.t;
    st.s = ck.s;
    st.s_prev = ck.s_prev;
}

}  // namespace onsflow
