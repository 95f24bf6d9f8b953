#include "quscore/results.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace quscore {

namespace {

using nlohmann::json;

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + path.string());
    return out;
}

json entity_triple(const std::array<double, 3>& v) {
    return json{{"WT", v[0]}, {"TC", v[1]}, {"ET", v[2]}};
}

std::array<double, 3> read_triple(const json& j) {
    return {j.at("WT").get<double>(), j.at("TC").get<double>(), j.at("ET").get<double>()};
}

}  // namespace

ResultRow to_result_row(std::string team, const CaseResult& result) {
    ResultRow row;
    row.team = std::move(team);
    row.case_id = result.case_id;
    for (std::size_t e = 0; e < 3; ++e) {
        row.dice_auc[e] = result.entity[e].auc_dsc;
        row.ftp_auc[e] = result.entity[e].auc_ftp;
        row.ftn_auc[e] = result.entity[e].auc_ftn;
        row.score[e] = result.entity[e].score;
    }
    row.overall = result.overall;
    return row;
}

std::string result_csv_header() {
    return "team,case_id,"
           "DICE_AUC_WT,DICE_AUC_TC,DICE_AUC_ET,"
           "FTP_RATIO_AUC_WT,FTP_RATIO_AUC_TC,FTP_RATIO_AUC_ET,"
           "FTN_RATIO_AUC_WT,FTN_RATIO_AUC_TC,FTN_RATIO_AUC_ET,"
           "SCORE_WT,SCORE_TC,SCORE_ET,SCORE_OVERALL";
}

void write_results_csv(const std::filesystem::path& path, std::span<const ResultRow> rows) {
    if (rows.empty()) throw IoError("no result rows to write");
    auto out = open_out(path);
    out << result_csv_header() << "\n";
    for (const auto& row : rows) {
        out << row.team << "," << row.case_id;
        for (double v : row.dice_auc) out << "," << fixed4(v);
        for (double v : row.ftp_auc) out << "," << fixed4(v);
        for (double v : row.ftn_auc) out << "," << fixed4(v);
        for (double v : row.score) out << "," << fixed4(v);
        out << "," << fixed4(row.overall) << "\n";
    }
    if (!out) throw IoError("write error in " + path.string());
}

void write_results_json(const std::filesystem::path& path, std::span<const ResultRow> rows) {
    if (rows.empty()) throw IoError("no result rows to write");
    json doc;
    doc["rows"] = json::array();
    for (const auto& row : rows) {
        doc["rows"].push_back({{"team", row.team},
                               {"case_id", row.case_id},
                               {"DICE_AUC", entity_triple(row.dice_auc)},
                               {"FTP_RATIO_AUC", entity_triple(row.ftp_auc)},
                               {"FTN_RATIO_AUC", entity_triple(row.ftn_auc)},
                               {"SCORE", entity_triple(row.score)},
                               {"SCORE_OVERALL", row.overall}});
    }
    auto out = open_out(path);
    out << doc.dump(2) << "\n";
    if (!out) throw IoError("write error in " + path.string());
}

std::vector<ResultRow> read_results_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw IoError("malformed results file " + path.string() + ": " + e.what());
    }

    std::vector<ResultRow> rows;
    try {
        for (const auto& j : doc.at("rows")) {
            ResultRow row;
            row.team = j.at("team").get<std::string>();
            row.case_id = j.at("case_id").get<std::string>();
            row.dice_auc = read_triple(j.at("DICE_AUC"));
            row.ftp_auc = read_triple(j.at("FTP_RATIO_AUC"));
            row.ftn_auc = read_triple(j.at("FTN_RATIO_AUC"));
            row.score = read_triple(j.at("SCORE"));
            row.overall = j.at("SCORE_OVERALL").get<double>();
            rows.push_back(std::move(row));
        }
    } catch (const json::exception& e) {
        throw IoError("malformed results file " + path.string() + ": " + e.what());
    }
    return rows;
}

void write_curve_csv(const std::filesystem::path& path, const EntityCurve& curve) {
    auto out = open_out(path);
    out << "tau,dsc,ftp,ftn";
    if (curve.has_pr()) out << ",precision,recall";
    out << "\n";
    for (std::size_t i = 0; i < curve.taus.size(); ++i) {
        out << full(curve.taus[i]) << "," << full(curve.dsc[i]) << "," << full(curve.ftp[i])
            << "," << full(curve.ftn[i]);
        if (curve.has_pr()) {
            out << "," << full(curve.precision[i]) << "," << full(curve.recall[i]);
        }
        out << "\n";
    }
    if (!out) throw IoError("write error in " + path.string());
}

void write_rank_table_csv(const std::filesystem::path& path, const RankTable& table) {
    auto out = open_out(path);
    out << "team,case_id,rank_WT,rank_TC,rank_ET,CRS,NRS\n";
    const std::size_t c_count = table.cases.size();
    for (std::size_t t = 0; t < table.teams.size(); ++t) {
        for (std::size_t c = 0; c < c_count; ++c) {
            const auto& r = table.ranks[t * c_count + c];
            out << table.teams[t] << "," << table.cases[c] << "," << full(r[0]) << ","
                << full(r[1]) << "," << full(r[2]) << "," << full(table.crs[t * c_count + c])
                << "," << fixed4(table.nrs[t * c_count + c]) << "\n";
        }
    }
    if (!out) throw IoError("write error in " + path.string());
}

void write_pairwise_csv(const std::filesystem::path& path,
                        std::span<const PermTestResult> tests) {
    auto out = open_out(path);
    out << "team_a,team_b,observed_delta,p_value,n_permutations,exhaustive\n";
    for (const auto& t : tests) {
        out << t.team_a << "," << t.team_b << "," << full(t.observed_delta) << ","
            << full(t.p_value) << "," << t.n_permutations << ","
            << (t.exhaustive ? "true" : "false") << "\n";
    }
    if (!out) throw IoError("write error in " + path.string());
}

void write_leaderboard_csv(const std::filesystem::path& path, const Leaderboard& board) {
    auto out = open_out(path);
    out << "rank,team,FRS,mean_NRS\n";
    for (const auto& e : board.entries) {
        out << e.rank << "," << e.team << "," << fixed4(e.frs) << "," << fixed4(e.mean_nrs)
            << "\n";
    }
    if (!out) throw IoError("write error in " + path.string());
}

void write_leaderboard_json(const std::filesystem::path& path, const Leaderboard& board,
                            const RankTable& table) {
    json doc;
    doc["alpha"] = board.alpha;
    doc["teams"] = table.teams;
    doc["cases"] = table.cases;
    doc["leaderboard"] = json::array();
    for (const auto& e : board.entries) {
        doc["leaderboard"].push_back(
            {{"rank", e.rank}, {"team", e.team}, {"FRS", e.frs}, {"mean_NRS", e.mean_nrs}});
    }
    doc["pairwise"] = json::array();
    for (const auto& t : board.pairwise) {
        doc["pairwise"].push_back({{"team_a", t.team_a},
                                   {"team_b", t.team_b},
                                   {"observed_delta", t.observed_delta},
                                   {"p_value", t.p_value},
                                   {"n_permutations", t.n_permutations},
                                   {"seed", t.seed},
                                   {"exhaustive", t.exhaustive}});
    }
    auto out = open_out(path);
    out << doc.dump(2) << "\n";
    if (!out) throw IoError("write error in " + path.string());
}

}  // namespace quscore
