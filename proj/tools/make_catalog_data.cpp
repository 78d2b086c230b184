// Generates the two catalog arrays that are shipped as data files and checks
// their defining orthogonal-array properties by brute force before writing:
//
//   oa40_2pow20.csv  strength-3 OA with 40 runs over 20 two-level factors,
//                    built as [H; -H] from the Paley-I Hadamard matrix of
//                    order 20 (q = 19)
//   oa27_3pow4.csv   strength-3 index-unity OA with 27 runs over 4 ternary
//                    factors, x4 = x1 + x2 + x3 (mod 3)
//
// Usage: make_catalog_data <output-dir>

#include <array>
#include <fstream>
#include <iostream>
#include <vector>

int chi19(int x) {  // quadratic character mod 19
  x = ((x % 19) + 19) % 19;
  if (x == 0) return 0;
  for (int k = 1; k < 19; ++k)
    if ((k * k) % 19 == x) return 1;
  return -1;
}

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_catalog_data <output-dir>\n";
    return 1;
  }
  const std::string dir = argv[1];

  // Paley-I: H = I + C with C skew; two orientation conventions exist, pick
  // the one that satisfies H H^t = 20 I.
  std::array<std::array<int, 20>, 20> h{};
  for (int orient = 0; orient < 2; ++orient) {
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 20; ++j) {
        int c;
        if (i == 0 && j == 0) c = 0;
        else if (i == 0) c = 1;
        else if (j == 0) c = -1;
        else c = orient == 0 ? chi19(i - j) : chi19(j - i);
        h[i][j] = c + (i == j ? 1 : 0);
      }
    bool ok = true;
    for (int i = 0; i < 20 && ok; ++i)
      for (int j = 0; j < 20 && ok; ++j) {
        int dot = 0;
        for (int k = 0; k < 20; ++k) dot += h[i][k] * h[j][k];
        if (dot != (i == j ? 20 : 0)) ok = false;
      }
    if (ok) break;
    if (orient == 1) {
      std::cerr << "paley construction failed both orientations\n";
      return 1;
    }
  }

  // [H; -H], +1 -> level 0, -1 -> level 1
  std::vector<std::array<int, 20>> oa40;
  for (int s = 0; s < 2; ++s)
    for (int i = 0; i < 20; ++i) {
      std::array<int, 20> row{};
      for (int j = 0; j < 20; ++j) row[j] = (s == 0 ? h[i][j] : -h[i][j]) == 1 ? 0 : 1;
      oa40.push_back(row);
    }

  // strength 3: every 3-column projection shows all 8 patterns 5 times
  for (int a = 0; a < 20; ++a)
    for (int b = a + 1; b < 20; ++b)
      for (int c = b + 1; c < 20; ++c) {
        std::array<int, 8> cnt{};
        for (const auto& row : oa40) ++cnt[row[a] * 4 + row[b] * 2 + row[c]];
        for (int pat = 0; pat < 8; ++pat)
          if (cnt[pat] != 5) {
            std::cerr << "oa40 strength-3 check failed\n";
            return 1;
          }
      }

  {
    std::ofstream out(dir + "/oa40_2pow20.csv");
    for (int f = 0; f < 20; ++f) out << (f ? "," : "") << "f" << (f + 1);
    out << "\n";
    for (const auto& row : oa40) {
      for (int f = 0; f < 20; ++f) out << (f ? "," : "") << row[f];
      out << "\n";
    }
  }
  std::cout << "oa40_2pow20.csv: 40 runs, strength 3 verified\n";

  std::vector<std::array<int, 4>> oa27;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) oa27.push_back({a, b, c, (a + b + c) % 3});

  const int triples[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  for (const auto& t : triples) {
    std::array<int, 27> cnt{};
    for (const auto& row : oa27) ++cnt[row[t[0]] * 9 + row[t[1]] * 3 + row[t[2]]];
    for (int pat = 0; pat < 27; ++pat)
      if (cnt[pat] != 1) {
        std::cerr << "oa27 strength-3 check failed\n";
        return 1;
      }
  }

  {
    std::ofstream out(dir + "/oa27_3pow4.csv");
    out << "f1,f2,f3,f4\n";
    for (const auto& row : oa27) out << row[0] << "," << row[1] << "," << row[2] << "," << row[3] << "\n";
  }
  std::cout << "oa27_3pow4.csv: 27 runs, strength 3 verified\n";
  return 0;
}
