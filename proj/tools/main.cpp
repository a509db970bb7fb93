// Command-line front end: commit-message generation from code diffs by
// retrieval or classification, with corpus-BLEU evaluation.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cmg/config.hpp"
#include "cmg/errors.hpp"
#include "cmg/pipeline.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output_dir;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "run config file")
      ->required();
  cmd->add_option("--set", args.overrides,
                  "override a config key, e.g. --set seed=7 (repeatable)");
  cmd->add_option("--out", args.output_dir,
                  "override output_dir from the config");
}

cmg::RunConfig resolve(const CommonArgs& args) {
  cmg::RunConfig config = cmg::load_config(args.config_path);
  for (const std::string& assignment : args.overrides) {
    cmg::apply_override(config, assignment);
  }
  if (!args.output_dir.empty()) config.output_dir = args.output_dir;
  return config;
}

// NAME=PATH pairs for evaluate / sample-review.
std::vector<std::pair<std::string, std::string>> parse_named_files(
    const std::vector<std::string>& raw) {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(raw.size());
  for (const std::string& item : raw) {
    size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw cmg::Error(cmg::Err::Config,
                       cmg::strf("'%s' is not of the form NAME=PATH",
                                 item.c_str()));
    }
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"commit message generation from code diffs"};
  app.require_subcommand(1);

  CommonArgs preprocess_args;
  CLI::App* preprocess =
      app.add_subcommand("preprocess",
                         "normalize the splits, build the vocabulary and "
                         "write corpus statistics");
  add_common(preprocess, preprocess_args);

  CommonArgs fit_args;
  CLI::App* fit = app.add_subcommand(
      "fit", "fit the configured model on the training split");
  add_common(fit, fit_args);

  CommonArgs generate_args;
  std::string generate_input, generate_output;
  CLI::App* generate = app.add_subcommand(
      "generate", "generate one message per input diff line");
  add_common(generate, generate_args);
  generate->add_option("--input", generate_input,
                       "diff file to read (default: the test split)");
  generate->add_option("--output", generate_output,
                       "where to write messages ('-' for stdout; default: "
                       "generated.msg in the output dir)");

  CommonArgs evaluate_args;
  std::vector<std::string> evaluate_gen;
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "score generated messages against the test split");
  add_common(evaluate, evaluate_args);
  evaluate
      ->add_option("--gen", evaluate_gen,
                   "NAME=PATH of a generated-message file (repeatable)")
      ->required();

  CommonArgs review_args;
  std::vector<std::string> review_gen;
  size_t review_per_bucket = 10;
  uint64_t review_seed = 7;
  CLI::App* review = app.add_subcommand(
      "sample-review",
      "sample test rows per size bucket into a manual-review sheet");
  add_common(review, review_args);
  review
      ->add_option("--gen", review_gen,
                   "NAME=PATH of a generated-message file (repeatable)")
      ->required();
  review->add_option("--per-bucket", review_per_bucket,
                     "rows to sample per bucket");
  review->add_option("--seed", review_seed, "sampling seed");

  std::string mine_repo, mine_out_diff, mine_out_msg;
  size_t mine_max_tokens = 1000;
  CLI::App* mine = app.add_subcommand(
      "mine", "mine a git repository into a parallel diff/msg corpus");
  mine->add_option("--repo", mine_repo, "git repository path")->required();
  mine->add_option("--out-diff", mine_out_diff, "output diff file")
      ->required();
  mine->add_option("--out-msg", mine_out_msg, "output message file")
      ->required();
  mine->add_option("--max-diff-tokens", mine_max_tokens,
                   "skip commits whose diff has more tokens than this");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return 1;
  }

  try {
    if (*preprocess) {
      cmg::cmd_preprocess(resolve(preprocess_args), std::cout);
    } else if (*fit) {
      cmg::cmd_fit(resolve(fit_args), std::cout);
    } else if (*generate) {
      std::optional<std::string> in, out;
      if (!generate_input.empty()) in = generate_input;
      if (!generate_output.empty()) out = generate_output;
      std::vector<std::string> messages =
          cmg::cmd_generate(resolve(generate_args), in, out, std::cout);
      if (out && *out == "-") {
        for (const std::string& msg : messages) std::cout << msg << '\n';
      }
    } else if (*evaluate) {
      cmg::cmd_evaluate(resolve(evaluate_args),
                        parse_named_files(evaluate_gen), std::cout);
    } else if (*review) {
      cmg::cmd_sample_review(resolve(review_args),
                             parse_named_files(review_gen),
                             review_per_bucket, review_seed, std::cout);
    } else if (*mine) {
      cmg::cmd_mine(mine_repo, mine_out_diff, mine_out_msg, mine_max_tokens,
                    std::cout);
    }
  } catch (const cmg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cmg::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
