#include <string>

#include "CLI11.hpp"

#include "twist/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"exact Cayley-graph experiments on lamplighter-like groups"};
    app.require_subcommand(1);

    std::string config_path;
    twist::CmdOptions options;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config file")->required();
        cmd->add_option("--out", options.out_dir_override, "output directory");
        cmd->add_option("--workers", options.workers_override, "worker threads");
        cmd->add_option("--mem-cap", options.mem_cap_bytes, "byte budget for stored elements");
        cmd->add_flag("--dump-words", options.dump_words, "also write words.json");
    };

    const char* names[] = {"ball", "deadends", "acx", "witness", "constants", "digits"};
    const char* briefs[] = {
        "sphere sizes of an exact ball",
        "dead ends and their depths",
        "almost-convexity diagnostic per sphere",
        "witness family measurements",
        "alphabet quality constants (sample certificate)",
        "signed-digit alphabet search",
    };
    for (int i = 0; i < 6; ++i) add_common(app.add_subcommand(names[i], briefs[i]));

    CLI11_PARSE(app, argc, argv);

    for (const char* name : names)
        if (app.get_subcommand(name)->parsed())
            return twist::run_command(name, config_path, options);
    return twist::kExitConfigError;
}
