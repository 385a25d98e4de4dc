#ifndef NSLAB_SNAPSHOT_HPP_
#define NSLAB_SNAPSHOT_HPP_

#include <string>
#include <vector>

#include "nslab/field.hpp"

namespace nslab {

// Binary field snapshot (little-endian):
//   char[8]  magic "NSLABFLD"
//   uint32   version (1)
//   uint32   dim, n, component count
//   float64  time
//   float64  samples: component-major, each component row-major (last axis fastest)
struct Snapshot {
  Grid grid;
  double time = 0.0;
  std::vector<ScalarField> components;
};

void write_snapshot(const std::string& path, double time, const std::vector<ScalarField>& components);
Snapshot read_snapshot(const std::string& path);

// CSV with columns x0[,x1[,x2]],c0,c1,...; intended for small grids.
void write_snapshot_csv(const std::string& path, const std::vector<ScalarField>& components);

}  // namespace nslab

#endif  // NSLAB_SNAPSHOT_HPP_
