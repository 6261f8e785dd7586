#include "tricount/bench.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "tricount/graph_core.hpp"
#include "tricount/graph_io.hpp"
#include "tricount/oracle.hpp"

namespace tricount::bench {

namespace {

struct ChildResult {
  bool timed_out = false;
  bool failed = false;
  std::uint64_t triangles = 0;
  double elapsed_ms = 0.0;
  std::int64_t peak_mem_bytes = -1;
};

// Runs argv in a child, captures stdout, kills on timeout; peak RSS comes
// from wait4 accounting.
ChildResult run_child(const std::vector<std::string>& argv, double timeout_s) {
  int fds[2];
  if (pipe(fds) != 0) throw IoError("pipe failed");

  pid_t pid = fork();
  if (pid < 0) throw IoError("fork failed");
  if (pid == 0) {
    dup2(fds[1], STDOUT_FILENO);
    close(fds[0]);
    close(fds[1]);
    std::vector<char*> cargv;
    for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    execv(cargv[0], cargv.data());
    _exit(127);
  }
  close(fds[1]);

  ChildResult res;
  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_s);
  int status = 0;
  rusage ru{};
  for (;;) {
    pid_t r = wait4(pid, &status, WNOHANG, &ru);
    if (r == pid) break;
    if (r < 0) throw IoError("wait4 failed");
    if (std::chrono::steady_clock::now() >= deadline) {
      kill(pid, SIGKILL);
      wait4(pid, &status, 0, &ru);
      res.timed_out = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }

  std::string output;
  char buf[4096];
  ssize_t n;
  while ((n = read(fds[0], buf, sizeof buf)) > 0) output.append(buf, std::size_t(n));
  close(fds[0]);

  res.peak_mem_bytes = std::int64_t(ru.ru_maxrss) * 1024;  // KiB on Linux
  if (res.timed_out) return res;
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    res.failed = true;
    return res;
  }
  std::istringstream out(output);
  if (!(out >> res.triangles >> res.elapsed_ms)) res.failed = true;
  return res;
}

// gen:nodes=N,density=D,seed=S or gen:arcs=M,density=D,seed=S
io::GenSpec parse_genspec(const std::string& s) {
  io::GenSpec spec;
  bool have_size = false;
  std::stringstream ss(s.substr(4));
  std::string kv;
  while (std::getline(ss, kv, ',')) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("bad genspec field: " + kv);
    std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
    if (k == "nodes") {
      spec.mode = io::GenSpec::Mode::by_nodes;
      spec.nodes = std::stoull(v);
      have_size = true;
    } else if (k == "arcs") {
      spec.mode = io::GenSpec::Mode::by_arcs;
      spec.arcs = std::stoull(v);
      have_size = true;
    } else if (k == "density") {
      spec.density = std::stod(v);
    } else if (k == "seed") {
      spec.seed = std::stoull(v);
    } else {
      throw ConfigError("unknown genspec field: " + k);
    }
  }
  if (!have_size || spec.density <= 0.0) throw ConfigError("incomplete genspec: " + s);
  return spec;
}

io::GraphFormat infer_format(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  if (ext == ".gr" || ext == ".dimacs") return io::GraphFormat::dimacs;
  if (ext == ".snap" || ext == ".txt") return io::GraphFormat::snap;
  return io::GraphFormat::edgelist;
}

void write_record(std::ofstream& csv, const BenchRecord& r) {
  csv << r.name << ',' << r.engine << ',' << r.workers << ','
      << (r.run == 0 ? std::string("mean") : std::to_string(r.run)) << ',' << r.triangles << ','
      << r.elapsed_ms << ',' << r.peak_mem_bytes << ',' << (r.timed_out ? 1 : 0) << '\n';
}

}  // namespace

std::vector<BenchCase> parse_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  std::vector<BenchCase> cases;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' ||
        line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    BenchCase c;
    std::istringstream ls(line);
    if (!(ls >> c.name >> c.engine >> c.input >> c.workers >> c.repeat >> c.timeout_s))
      throw MalformedLine(line_no, line);
    std::string extra;
    if (ls >> extra) throw MalformedLine(line_no, line);
    if (c.engine != "pipeline" && c.engine != "mapreduce" && c.engine != "oracle")
      throw MalformedLine(line_no, line);
    if (c.repeat < 1 || c.timeout_s <= 0) throw MalformedLine(line_no, line);
    cases.push_back(std::move(c));
  }
  return cases;
}

std::vector<BenchRecord> run_bench(std::span<const BenchCase> cases,
                                   const std::filesystem::path& csv_out,
                                   const std::filesystem::path& self_exe) {
  std::ofstream csv(csv_out);
  if (!csv) throw IoError("cannot open " + csv_out.string());
  csv << "name,engine,workers,run,triangles,elapsed_ms,peak_mem_bytes,timed_out\n";

  std::vector<BenchRecord> records;
  std::vector<std::filesystem::path> temp_files;

  for (const BenchCase& c : cases) {
    std::filesystem::path input;
    io::GraphFormat format = io::GraphFormat::edgelist;
    if (c.input.starts_with("gen:")) {
      auto edges = io::generate(parse_genspec(c.input));
      input = std::filesystem::temp_directory_path() / ("tricount_bench_" + c.name + ".el");
      io::write(edges, input, io::GraphFormat::edgelist);
      temp_files.push_back(input);
    } else {
      input = c.input;
      format = infer_format(input);
    }

    // trusted reference count, computed once per case before any timing
    auto dedup = dedup_stream(io::parse(input, format));
    const std::uint64_t expected = oracle::count_triangles_exact(dedup);

    std::vector<std::string> argv = {self_exe.string(), "count", "--timing",
                                     "--algo", c.engine, "--input", input.string(),
                                     "--format", io::to_string(format)};
    std::filesystem::path spill;
    if (c.engine == "pipeline" && c.workers > 0) {
      argv.insert(argv.end(), {"--workers", std::to_string(c.workers)});
    } else if (c.engine == "mapreduce") {
      // spill the round boundary: dense cases exceed memory if held
      spill = std::filesystem::temp_directory_path() / ("tricount_bench_spill_" + c.name);
      argv.insert(argv.end(), {"--mappers", std::to_string(c.workers), "--reducers",
                               std::to_string(c.workers), "--channel-cap", "4096",
                               "--spill", spill.string()});
    }

    double elapsed_sum = 0.0;
    std::size_t completed = 0;
    std::int64_t peak_max = -1;
    bool any_timeout = false;
    std::uint64_t triangles = 0;
    for (std::size_t run = 1; run <= c.repeat; ++run) {
      ChildResult cr = run_child(argv, c.timeout_s);
      if (cr.failed) throw IoError("benchmark child failed for case " + c.name);
      BenchRecord rec{c.name, c.engine, c.workers, run,
                      cr.timed_out ? 0 : cr.triangles, cr.elapsed_ms,
                      cr.peak_mem_bytes, cr.timed_out};
      if (!cr.timed_out) {
        if (cr.triangles != expected)
          throw IoError("case " + c.name + ": engine count " + std::to_string(cr.triangles) +
                        " != oracle " + std::to_string(expected));
        elapsed_sum += cr.elapsed_ms;
        ++completed;
        triangles = cr.triangles;
        peak_max = std::max(peak_max, cr.peak_mem_bytes);
      } else {
        any_timeout = true;
      }
      write_record(csv, rec);
      records.push_back(std::move(rec));
    }

    BenchRecord agg{c.name, c.engine, c.workers, 0, triangles,
                    completed ? elapsed_sum / double(completed) : 0.0, peak_max, any_timeout};
    write_record(csv, agg);
    records.push_back(std::move(agg));
    csv.flush();
    if (!spill.empty()) std::filesystem::remove_all(spill);
  }

  for (const auto& f : temp_files) std::filesystem::remove(f);
  return records;
}

}  // namespace tricount::bench
