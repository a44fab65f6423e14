#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
调和插值实验台 - 主程序入口

使用方法:
    python main.py compute-h --q 3 --s 5          # 构造 ℍ_5 并写入缓存
    python main.py verify theorem5 --q 2 --s 3    # 幂和提取核对
    python main.py scan conjecture --q 3 --maxdeg 4
    python main.py --help                         # 显示帮助信息

退出码: 0 全部通过, 1 已证明的恒等式被违反, 2 猜想证据异常, 3 用法或预算错误
"""

import sys
import os
import argparse
import logging

# 添加当前目录到路径
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from config import PROJECT_TITLE, PROJECT_VERSION
from algebra import field_for_q
from errors import BudgetExceeded, ConfigError
from reports import EXIT_HARD, EXIT_USAGE, RunConfig
from runner import SCAN_COMMANDS, VERIFY_COMMANDS, run


class ArgumentParser(argparse.ArgumentParser):
    """用法错误统一使用退出码 3"""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: 错误: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def print_welcome():
    """打印欢迎信息"""
    print()
    print("=" * 60)
    print(f"  {PROJECT_TITLE} v{PROJECT_VERSION}")
    print("  F_q[θ] 上扭调和和的插值多项式与有限 zeta 值")
    print("=" * 60)
    print()


def _int_list(text: str):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} 不是逗号分隔的整数列表") from None


def build_parser() -> ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='key = value 格式的配置文件')
    common.add_argument('--q', type=int, help='域的大小（非素数 q 使用默认模多项式）')
    common.add_argument('--s', type=_int_list, help='s 的列表，例如 3,5')
    common.add_argument('--maxdeg', type=int, help='扫描的素元最高次数')
    common.add_argument('--d-lo', type=int, dest='d_lo', help='d 窗口下界')
    common.add_argument('--d-hi', type=int, dest='d_hi', help='d 窗口上界')
    common.add_argument('--n-max', type=int, dest='n_max', help='扫描的 n 上界')
    common.add_argument('--s-max', type=int, dest='s_max', help='扫描的 s 上界')
    common.add_argument('--threads', type=int, help='工作进程数（1 表示不用进程池）')
    common.add_argument('--cache-dir', dest='cache_dir', help='ℍ_s 缓存目录')
    common.add_argument('--out-dir', dest='out_dir', help='结果输出目录')
    common.add_argument('--force', action='store_true', default=None,
                        help='忽略成本上限并重新计算缓存')
    common.add_argument('--quiet', action='store_true', help='不显示进度条')
    common.add_argument('--debug', action='store_true', help='开启调试模式')

    # 公共参数写在子命令之后，例如 verify nu --q 3 --s 5
    parser = ArgumentParser(description=f'{PROJECT_TITLE} - 批量核对与扫描')
    commands = parser.add_subparsers(dest='command', required=True, parser_class=ArgumentParser)
    commands.add_parser('compute-h', parents=[common], help='由两条路线构造 ℍ_s 并写入缓存')
    verify = commands.add_parser('verify', parents=[common], help='核对恒等式')
    verify.add_argument('subcommand', choices=VERIFY_COMMANDS)
    scan = commands.add_parser('scan', parents=[common], help='逐素元扫描')
    scan.add_argument('subcommand', choices=SCAN_COMMANDS)
    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    """优先级：config.py 默认值 < 配置文件 < 命令行参数"""
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    cfg.command = args.command
    cfg.subcommand = getattr(args, 'subcommand', '') or ''
    if args.q is not None:
        field = field_for_q(args.q)
        cfg.p, cfg.e = field.p, field.e
        cfg.modulus = field.modulus if field.e > 1 else ()
    for name in ('s', 'maxdeg', 'd_lo', 'd_hi', 'n_max', 's_max', 'threads',
                 'cache_dir', 'out_dir', 'force'):
        value = getattr(args, name, None)
        if value is not None:
            setattr(cfg, name, value)
    if cfg.threads < 1:
        raise ConfigError(f"threads = {cfg.threads} 必须为正")
    return cfg


def print_summary(bundle):
    print()
    print("-" * 60)
    print(f"  命令: {bundle.command}")
    print(f"  检查 {len(bundle.checks)} 项，失败 {len(bundle.failures)}，异常发现 {len(bundle.findings)}")
    for check in bundle.failures[:10]:
        print(f"  ✗ {check.name} {check.coords} {check.detail}")
    for check in bundle.findings[:10]:
        print(f"  ? {check.name} {check.coords} {check.detail}")
    for note in bundle.notes:
        print(f"  ⚠ 未完成: {note}")
    for name, path in sorted(bundle.artifacts.items()):
        print(f"  → {path}")
    print("-" * 60)


def main():
    """主函数"""
    parser = build_parser()
    args = parser.parse_args()

    level = logging.DEBUG if args.debug else (logging.WARNING if args.quiet else logging.INFO)
    logging.basicConfig(level=level, format='%(asctime)s %(name)s %(levelname)s: %(message)s')

    if not args.quiet:
        print_welcome()

    try:
        cfg = build_config(args)
        bundle = run(cfg, quiet=args.quiet)
    except KeyboardInterrupt:
        print("\n\n  计算被中断。")
        sys.exit(EXIT_USAGE)
    except (ConfigError, BudgetExceeded) as e:
        if args.debug:
            raise
        print(f"\n  参数错误: {e}")
        sys.exit(EXIT_USAGE)
    except Exception as e:
        if args.debug:
            raise
        print(f"\n  发生错误: {e}")
        print("  请检查配置或使用 --debug 参数查看详细信息。")
        sys.exit(EXIT_HARD)

    if not args.quiet:
        print_summary(bundle)
    sys.exit(bundle.exit_code)


if __name__ == "__main__":
    main()
