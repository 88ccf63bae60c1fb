#include "normsol/io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace normsol;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir()
{
    const auto dir = fs::temp_directory_path() / ("normsol_io_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST(Io, FormatRoundTrips)
{
    for (double x : {0.1, 1.0 / 3.0, -2.720699046351, 1e-300, 6.02214076e23})
        EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(Io, CsvRoundTrip)
{
    const auto dir = scratch_dir();
    const std::vector<std::vector<double>> cols{{-1.0, 0.0, 0.5}, {std::sqrt(2.0), 1e-17, -3.25}};
    write_atomic(dir / "t.csv", csv_table({"x", "v"}, cols));
    std::vector<std::string> header;
    const auto back = read_csv_columns((dir / "t.csv").string(), &header);
    EXPECT_EQ(header, (std::vector<std::string>{"x", "v"}));
    EXPECT_EQ(back, cols);
    fs::remove_all(dir);
}

TEST(Io, CsvRejectsRaggedColumns)
{
    EXPECT_THROW(csv_table({"a", "b"}, {{1.0, 2.0}, {1.0}}), Error);
    EXPECT_THROW(csv_table({"a"}, {{1.0}, {2.0}}), Error);
}

TEST(Io, AtomicWriteReplacesAndLeavesNoTemporary)
{
    const auto dir = scratch_dir();
    const auto target = dir / "out.json";
    write_atomic(target, "first");
    write_atomic(target, "second");
    std::ifstream in(target);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), "second");
    int entries = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir))
        ++entries;
    EXPECT_EQ(entries, 1);
    fs::remove_all(dir);
}

TEST(Io, AtomicWriteToMissingDirectoryFails)
{
    const auto dir = scratch_dir();
    EXPECT_THROW(write_atomic(dir / "no" / "such" / "file.csv", "x"), Error);
    fs::remove_all(dir);
}
